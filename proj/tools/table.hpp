#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace polyham::cli {

using Cell = std::variant<std::string, double, long long, bool>;

// A result table.  CSV output starts with "# schema=NAME version=N"; JSON carries the
// same schema, version and columns.
struct Table {
    std::string schema;
    int version = 1;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

}  // namespace polyham::cli
