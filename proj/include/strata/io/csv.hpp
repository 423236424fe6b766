#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "strata/core/attribute.hpp"
#include "strata/core/data_table.hpp"

namespace strata {

/// Parses a CSV document with a header row. `numericColumns` must exist and are always numeric;
/// other columns are numeric when every non-blank cell parses, else strings. Blank or non-numeric
/// cells in numeric columns become 0 and are tallied as "blankCells" / "nonNumericCells".
/// Throws IngestError naming a missing column or a malformed row.
DataRef parseCsv(std::string_view text, const std::vector<std::string>& numericColumns = {},
                 Diagnostics* diagnostics = nullptr, const std::string& source = "<csv>");

/// Reads and parses a CSV file. Throws IngestError naming the path when it cannot be read.
DataRef ingestCsv(const std::string& path, const std::vector<std::string>& numericColumns = {},
                  Diagnostics* diagnostics = nullptr);

/// Whole file contents. Throws IngestError naming the path.
std::string readTextFile(const std::string& path);

}  // namespace strata
