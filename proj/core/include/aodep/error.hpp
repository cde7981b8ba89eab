#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aodep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points whose dimension does not match ModelParams::d.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid model or potential parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Body pair identified by kind and index: `sphere_sphere` pairs index two
/// spheres, `sphere_particle` pairs index (sphere, particle).
struct BodyPair {
  enum class Kind { sphere_sphere, sphere_particle };
  Kind kind;
  std::size_t first;
  std::size_t second;

  friend bool operator==(const BodyPair&, const BodyPair&) = default;
};

/// Constraint projection did not converge.
class ProjectionError : public Error {
 public:
  ProjectionError(const std::string& what, std::vector<BodyPair> pairs)
      : Error(what), pairs_(std::move(pairs)) {}

  const std::vector<BodyPair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<BodyPair> pairs_;
};

/// Integrator or sampler failure, tagged with the step at which it happened.
class RuntimeFailure : public Error {
 public:
  RuntimeFailure(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace aodep
