// Full analysis of the pair (Phi_14, Phi_3 Phi_5).
#include <iostream>

#include "hypergeom/hypergeom.hpp"

int main() {
    using namespace hgm;
    PolyPair pair = parse_pair("C14 | C3*C5");
    PipelineConfig cfg;
    RowReport r = analyze(pair, cfg);
    std::cout << r.pair << "  Coeff " << r.coeff << "  status " << r.status() << '\n';
    if (r.level) std::cout << "iLevel " << format_factorization(*r.level) << "  iIndex " << format_factorization(*r.index) << '\n';
    return r.status() == "ok" ? 0 : 1;
}
