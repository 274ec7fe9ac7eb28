#ifndef FLOQPOL_FORMAT_HPP
#define FLOQPOL_FORMAT_HPP

#include <string>
#include <vector>

namespace floqpol {

/// printf "%.17g": round-trips every double and is byte-stable.
std::string format_double(double value);

/// One CSV line (no quoting; fields never contain commas).
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace floqpol

#endif  // FLOQPOL_FORMAT_HPP
