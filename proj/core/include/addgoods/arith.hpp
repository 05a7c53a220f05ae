// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "addgoods/model.hpp"

namespace addgoods {

/// d together with integers c_i such that sum_i c_i * v_i = d = gcd(v_1, ..., v_m).
struct BezoutCertificate {
    BigInt gcd;
    std::vector<BigInt> coefficients;
};

/// gcd of nonnegative integers with gcd(0, x) = x. Throws std::domain_error on an all-zero list.
BigInt gcd_list(std::span<const BigInt> values);

/// Left fold of the two-argument extended Euclidean algorithm. The identity is checked
/// before returning. Throws std::domain_error on an all-zero or negative input.
BezoutCertificate bezout_list(std::span<const BigInt> values);

/// Smallest integer >= numerator / denominator. Throws std::domain_error unless denominator > 0.
BigInt ceil_div(const BigInt& numerator, const BigInt& denominator);
/// Largest integer <= numerator / denominator. Throws std::domain_error unless denominator > 0.
BigInt floor_div(const BigInt& numerator, const BigInt& denominator);

} // namespace addgoods
