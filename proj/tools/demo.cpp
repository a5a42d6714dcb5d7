// Walks through the library API on the smallest interesting case, R = F_3[a]/(a^3).
#include <iostream>

#include "ainf/ainf.hpp"

int main()
{
    using namespace ainf;

    auto rec = make_cyclic_record(3, 3, default_truncation(6, 2), SectionMode::closed_form);
    const auto& k = rec->field();

    // Cycle representatives: xi for x, eta for y.
    const auto& hom = rec->homology();
    std::cout << "x is represented by\n" << format_map(k, hom.representative(1, 0), 2);
    std::cout << "y is represented by\n" << format_map(k, hom.representative(2, 0), 2);

    auto summary = rec->compute_structure(6);
    std::cout << "status: " << status_string(summary.halting) << "\n";

    Tuple xxx(3, BasisRef{1, 0});
    std::cout << "m_3(x,x,x) = " << class_to_string(k, rec->high_product(xxx)) << "\n";
    std::cout << "f_2(x,x):\n" << format_map(k, rec->high_map({{1, 0}, {1, 0}}), 2);

    // k[y]-linearity: m_3(xy, x, x) = y m_3(x, x, x).
    Tuple xy_x_x{{3, 0}, {1, 0}, {1, 0}};
    std::cout << "m_3(xy,x,x) = " << class_to_string(k, rec->high_product(xy_x_x)) << "\n";

    VerifyOptions vo;
    vo.max_arity = 2 * summary.halting.arity;
    std::cout << "Stasheff identities: " << verify_structure(*rec, vo).summary() << "\n";
}
