#ifndef RFSO_TESTS_SERIES_ORACLES_HPP
#define RFSO_TESTS_SERIES_ORACLES_HPP

// High-precision partial-sum oracles for the hypergeometric functions,
// independent of the library implementations (direct term recurrences over
// BigFloat, no transformations).

#include "support/bigfloat.hpp"

namespace testsupport {

inline double hp_hyp1f1(double a, double b, double z, int terms = 200) {
    BigFloat sum(1.0);
    BigFloat term(1.0);
    for (int k = 0; k < terms; ++k) {
        term = term.mul_sum(a, k).mul_double(z).div_sum(b, k).div_sum(1.0, k);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum.to_double();
}

inline double hp_hyp2f1(double a, double b, double c, double z, int terms = 300) {
    BigFloat sum(1.0);
    BigFloat term(1.0);
    for (int k = 0; k < terms; ++k) {
        term = term.mul_sum(a, k).mul_sum(b, k).mul_double(z).div_sum(c, k).div_sum(1.0, k);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum.to_double();
}

} // namespace testsupport

#endif
