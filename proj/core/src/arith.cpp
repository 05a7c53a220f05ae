// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/arith.hpp"

#include <stdexcept>

namespace addgoods {

namespace {

void require_nonnegative(std::span<const BigInt> values) {
    bool any_positive = false;
    for (const auto& v : values) {
        if (v < 0) {
            throw std::domain_error("gcd is only defined here for nonnegative integers");
        }
        any_positive = any_positive || v > 0;
    }
    if (!any_positive) {
        throw std::domain_error("gcd undefined for zero vector");
    }
}

struct EuclidStep {
    BigInt gcd;
    BigInt s; // coefficient of the first argument
    BigInt t; // coefficient of the second argument
};

// m*s + n*t = gcd(m, n) for m, n >= 0.
EuclidStep extended_euclid(const BigInt& m, const BigInt& n) {
    BigInt old_r = m, r = n;
    BigInt old_s = 1, s = 0;
    BigInt old_t = 0, t = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = std::move(r);
        r = std::move(tmp);
        tmp = old_s - q * s;
        old_s = std::move(s);
        s = std::move(tmp);
        tmp = old_t - q * t;
        old_t = std::move(t);
        t = std::move(tmp);
    }
    return {old_r, old_s, old_t};
}

} // namespace

BigInt gcd_list(std::span<const BigInt> values) {
    require_nonnegative(values);
    BigInt g = 0;
    for (const auto& v : values) {
        g = boost::multiprecision::gcd(g, v);
    }
    return g;
}

BezoutCertificate bezout_list(std::span<const BigInt> values) {
    require_nonnegative(values);
    BezoutCertificate cert;
    cert.gcd = 0;
    cert.coefficients.reserve(values.size());
    for (const auto& v : values) {
        if (cert.coefficients.empty()) {
            cert.gcd = v;
            cert.coefficients.emplace_back(1);
            continue;
        }
        EuclidStep step = extended_euclid(cert.gcd, v);
        for (auto& c : cert.coefficients) {
            c *= step.s;
        }
        cert.coefficients.push_back(std::move(step.t));
        cert.gcd = std::move(step.gcd);
    }

    BigInt check = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        check += cert.coefficients[i] * values[i];
    }
    if (check != cert.gcd) {
        throw std::logic_error("Bezout identity does not hold");
    }
    return cert;
}

BigInt floor_div(const BigInt& numerator, const BigInt& denominator) {
    if (denominator <= 0) {
        throw std::domain_error("floor_div: denominator must be positive");
    }
    // Integer division truncates toward zero.
    BigInt q = numerator / denominator;
    if (numerator % denominator != 0 && numerator < 0) {
        --q;
    }
    return q;
}

BigInt ceil_div(const BigInt& numerator, const BigInt& denominator) {
    if (denominator <= 0) {
        throw std::domain_error("ceil_div: denominator must be positive");
    }
    BigInt q = numerator / denominator;
    if (numerator % denominator != 0 && numerator > 0) {
        ++q;
    }
    return q;
}

} // namespace addgoods
