#ifndef LOEM_IO_HPP
#define LOEM_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "loem/metric.hpp"

namespace loem {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

// Metric space document:
//   # comments run to end of line, blank lines are skipped
//   points <n>
//   labels <n whitespace-free tokens>
//   <n rows of n entries>
// Entries are decimal floats or rationals written p or p/q. The document is
// exact iff every entry is in rational form.
RawMatrix parse_space_document(std::istream& in);
RawMatrix read_space_document(const std::string& path);

void write_space_document(std::ostream& out, const FiniteMetricSpace& space);
void write_space_document(const std::string& path, const FiniteMetricSpace& space);

// Point cloud, one point per row, entries separated by commas or whitespace.
std::vector<std::vector<double>> parse_point_cloud(std::istream& in);
std::vector<std::vector<double>> read_point_cloud(const std::string& path);

// Pairwise Euclidean distances of a point cloud, labelled p0, p1, ...
RawMatrix euclidean_matrix(const std::vector<std::vector<double>>& points);

}  // namespace loem

#endif
