#pragma once

#include <string>
#include <vector>

namespace d2dcov {

/// Locale-independent CSV cell for a double: "%.10g", or "nan" when the
/// value is not finite and not representable.
std::string csv_double(double value);
std::string csv_int(long long value);

/// Assemble a CSV document: header row plus data rows, '\n' line endings.
/// Formatting is deterministic so equal tables serialize to equal bytes.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace d2dcov
