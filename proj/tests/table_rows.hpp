#pragma once

#include <string>
#include <vector>

namespace hgm_test {

struct TableRow {
    int nr;
    std::string pair;
    int coeff;
    std::string level;  ///< "" when not pinned
    std::string index;
};

/// Degree-6 reference rows: Coeff, iLevel and iIndex.
inline const std::vector<TableRow>& table_rows() {
    static const std::vector<TableRow> rows{
        {158, "C4^2*C6 | C3*C10", 1, "2^3", "2^4*3^3*7"},
        {162, "C1^2*C2^2*C4 | C18", 1, "2*3^2", "2^4*3*7^2*13"},
        {167, "C1^2*C2^2*C4 | C3*C12", 1, "2*3", "2^9*3^3*5*7^2*13"},
        {390, "C14 | C2^2*C10", 2, "2^3*7^2", "2^14*3^5*5*7^2*19*43"},
        {394, "C1^2*C4*C6 | C14", 2, "2^3", "2^8*3^3*5*7"},
        {437, "C7 | C2^2*C3^2", 3, "2", "2^5*3^2"},
        {468, "C14 | C3*C5", 3, "1", "1"},
        {534, "C6*C10 | C7", 3, "1", "1"},
        {774, "C1^6 | C14", 5, "2", "2^2*3^2"},
        {819, "C1^6 | C18", 6, "2*3", "2^3*3^5*5*7^2*13"},
        {838, "C1^6 | C7", 7, "2*7^2", "2^15*3^6*5^2*7^22*19*43"},
    };
    return rows;
}

}  // namespace hgm_test
