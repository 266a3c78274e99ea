#pragma once

#include <cstdint>

namespace toa {

struct HypEvalPolicy {
    double series_tolerance = 1e-15;
    int max_terms = 500;

    void validate() const;
};

// 0F1(;1;z) = sum_k z^k / (k!)^2, i.e. I0(2 sqrt z) for z >= 0 and J0(2 sqrt|z|) for z < 0.
double hyp0f1_one(double z, const HypEvalPolicy& policy = {});

// n!! with (-1)!! = 0!! = 1. Throws DomainError for n < -1 or when the result overflows.
std::uint64_t double_factorial(int n);

// (2k-1)!! / k! as a double, valid well past the range where double_factorial overflows.
double odd_factorial_ratio(int k);

}  // namespace toa
