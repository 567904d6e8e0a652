#include "idforge/dyadic.hpp"

#include <stdexcept>

namespace idforge {

DyadicMeasure::DyadicMeasure(BigNat numerator, unsigned exponent)
    : num_(std::move(numerator)), exp_(exponent) {
    if (num_ < 0)
        throw std::domain_error("DyadicMeasure: negative numerator");
    reduce();
    // value must stay within [0, 1]
    if (num_ > (BigNat(1) << exp_))
        throw std::domain_error("DyadicMeasure: value exceeds 1");
}

void DyadicMeasure::reduce() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
        num_ >>= 1;
        --exp_;
    }
}

DyadicMeasure DyadicMeasure::one_minus_half_pow(unsigned n) {
    return {(BigNat(1) << n) - 1, n};
}

DyadicMeasure DyadicMeasure::operator+(const DyadicMeasure& rhs) const {
    unsigned e = std::max(exp_, rhs.exp_);
    BigNat a = num_ << (e - exp_);
    BigNat b = rhs.num_ << (e - rhs.exp_);
    return {a + b, e};
}

DyadicMeasure DyadicMeasure::operator-(const DyadicMeasure& rhs) const {
    unsigned e = std::max(exp_, rhs.exp_);
    BigNat a = num_ << (e - exp_);
    BigNat b = rhs.num_ << (e - rhs.exp_);
    if (a < b)
        throw std::domain_error("DyadicMeasure: negative difference");
    return {a - b, e};
}

int DyadicMeasure::compare(const DyadicMeasure& rhs) const {
    unsigned e = std::max(exp_, rhs.exp_);
    BigNat a = num_ << (e - exp_);
    BigNat b = rhs.num_ << (e - rhs.exp_);
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

bool DyadicMeasure::less_than(std::uint64_t p, std::uint64_t q) const {
    if (q == 0)
        throw std::domain_error("DyadicMeasure: zero denominator");
    // num/2^exp < p/q  <=>  num*q < p*2^exp
    return num_ * q < (BigNat(p) << exp_);
}

bool DyadicMeasure::at_least(std::uint64_t p, std::uint64_t q) const {
    return !less_than(p, q);
}

double DyadicMeasure::to_double() const {
    return num_.convert_to<double>() / std::pow(2.0, static_cast<double>(exp_));
}

std::string DyadicMeasure::str() const {
    return num_.str() + "/2^" + std::to_string(exp_);
}

} // namespace idforge
