#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "aodep/dynamics.hpp"

namespace aodep {

/// Snapshot records: one body per line, `step,time,S|P,index,x_1,...,x_d`
/// with every float in hexadecimal notation so that reading reproduces the
/// written bits. Lines starting with '#' are comments.
void write_snapshot(std::ostream& out, const Snapshot& snap);
void write_snapshot_header(std::ostream& out, int d);

/// Groups consecutive records sharing a step into snapshots. Throws
/// ParameterError with the line number on malformed input.
std::vector<Snapshot> read_snapshots(std::istream& in);
std::vector<Snapshot> read_snapshots_file(const std::string& path);

/// Sparse local-time triples `kind,i,j,value` with kind SS or SP; zero
/// entries are skipped.
void write_local_times(std::ostream& out, std::size_t step, const SymmetricMatrix& spheres,
                       const RectMatrix& particles);

std::string hex_double(double v);
double parse_hex_double(const std::string& text);

/// Ordered key = value document under one [section] header per map entry.
using MetadataSection = std::vector<std::pair<std::string, std::string>>;
void write_metadata(std::ostream& out,
                    const std::vector<std::pair<std::string, MetadataSection>>& sections);

}  // namespace aodep
