#pragma once

// Delimited-text datasets and gene-set files.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mdd/matrix.hpp"

namespace mdd {

/// Reads a header-first delimited table. `response` is matched against the
/// header names first; if no name matches and it is a non-negative integer it
/// is taken as a 0-based column index. Remaining columns become X in file
/// order. Parse failures name the 1-based data row and the column.
Dataset read_dataset(const std::filesystem::path& path, const std::string& response, char delimiter = ',');
Dataset parse_dataset(std::istream& in, const std::string& response, char delimiter = ',');

/// Header "response_name,col...", values printed with 17 significant digits
/// so a read after write reproduces every double exactly.
void write_dataset(const std::filesystem::path& path, const Dataset& data, char delimiter = ',');
void write_dataset(std::ostream& out, const Dataset& data, char delimiter = ',');

struct GeneSet {
  std::string id;
  std::vector<std::size_t> columns;  // indices into the dataset's covariates, file order
};

struct GeneSetCollection {
  std::vector<GeneSet> sets;
};

/// One set per line: set_id TAB comma-separated column names. Blank lines and
/// lines starting with '#' are skipped.
GeneSetCollection read_gene_sets(const std::filesystem::path& path, const Dataset& data);
GeneSetCollection parse_gene_sets(std::istream& in, const Dataset& data);

}  // namespace mdd
