#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace idforge {

using BigNat = boost::multiprecision::cpp_int;

// Exact dyadic rational in [0, 1]: numerator / 2^exponent, kept reduced so the
// numerator is odd unless the value is zero.  All arithmetic and comparisons
// are exact; comparisons against non-dyadic rationals p/q cross-multiply.
class DyadicMeasure {
public:
    DyadicMeasure() = default; // zero
    DyadicMeasure(BigNat numerator, unsigned exponent);

    static DyadicMeasure zero() { return {}; }
    static DyadicMeasure one() { return {1, 0}; }
    static DyadicMeasure half_pow(unsigned n) { return {1, n}; }           // 1/2^n
    static DyadicMeasure one_minus_half_pow(unsigned n);                   // 1 - 1/2^n

    const BigNat& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }
    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && exp_ == 0; }

    DyadicMeasure operator+(const DyadicMeasure& rhs) const;
    DyadicMeasure operator-(const DyadicMeasure& rhs) const; // requires *this >= rhs

    // negative / zero / positive <=> less / equal / greater
    int compare(const DyadicMeasure& rhs) const;
    bool operator==(const DyadicMeasure& rhs) const { return compare(rhs) == 0; }
    bool operator!=(const DyadicMeasure& rhs) const { return compare(rhs) != 0; }
    bool operator<(const DyadicMeasure& rhs) const { return compare(rhs) < 0; }
    bool operator<=(const DyadicMeasure& rhs) const { return compare(rhs) <= 0; }
    bool operator>(const DyadicMeasure& rhs) const { return compare(rhs) > 0; }
    bool operator>=(const DyadicMeasure& rhs) const { return compare(rhs) >= 0; }

    // Exact comparison against the rational p/q (q > 0).
    bool less_than(std::uint64_t p, std::uint64_t q) const;
    bool at_least(std::uint64_t p, std::uint64_t q) const;

    double to_double() const;
    std::string str() const; // "numerator/2^exponent"

private:
    BigNat num_ = 0;
    unsigned exp_ = 0;

    void reduce();
};

} // namespace idforge
