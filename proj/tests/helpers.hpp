#pragma once

#include "enlarge/basis.hpp"

#include <initializer_list>

namespace testing {

inline enlarge::Rational q(long num, long den = 1) { return enlarge::make_rational(num, den); }

/// Scalar process from per-outcome rows of values at ticks 0..K.
inline enlarge::Process scalar(std::initializer_list<std::initializer_list<enlarge::Rational>> rows) {
    const std::size_t n = rows.size();
    const int ticks = static_cast<int>(rows.begin()->size()) - 1;
    enlarge::Process x(n, ticks, 1);
    std::size_t w = 0;
    for (const auto& row : rows) {
        int k = 0;
        for (const auto& v : row) x(w, k++) = v;
        ++w;
    }
    return x;
}

}  // namespace testing
