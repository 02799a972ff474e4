#ifndef EPPOOL_UTIL_HPP
#define EPPOOL_UTIL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace eppool {

double logsumexp(const Eigen::VectorXd& x);
double logsumexp(double a, double b);

/// Quantile of unsorted values by linear interpolation (type 7).
double quantile(std::vector<double> values, double q);

std::vector<std::string> split_csv_line(const std::string& line);

/// Writes via a temp file in the same directory, then renames into place.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace eppool

#endif
