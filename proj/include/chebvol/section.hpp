#pragma once

#include <map>
#include <stdexcept>

#include "exponent.hpp"
#include "rational.hpp"

namespace chebvol {

struct ZeroSectionError : std::domain_error {
    ZeroSectionError() : std::domain_error("zero section has no valuation") {}
};

/// A global section of the m-th power written in the monomial basis:
/// a Laurent-free polynomial sum a_beta t^beta with exact rational coefficients.
class Section {
public:
    explicit Section(int level, int dim) : level_(level), dim_(dim) {
        if (level < 0) throw std::invalid_argument("Section: negative level");
        if (dim < 1) throw std::invalid_argument("Section: dimension must be >= 1");
    }

    static Section monomial(int level, const Exponent& beta, const Rational& c = 1) {
        Section s(level, beta.dim());
        s.set(beta, c);
        return s;
    }

    int level() const { return level_; }
    int dim() const { return dim_; }
    bool is_zero() const { return coef_.empty(); }
    size_t term_count() const { return coef_.size(); }

    void set(const Exponent& beta, const Rational& c) {
        if (beta.dim() != dim_) throw std::invalid_argument("Section::set: dimension mismatch");
        if (c == 0)
            coef_.erase(beta);
        else
            coef_[beta] = c;
    }

    Rational coefficient(const Exponent& beta) const {
        auto it = coef_.find(beta);
        return it == coef_.end() ? Rational(0) : it->second;
    }

    /// Terms in increasing lex order of the exponent.
    const std::map<Exponent, Rational, LexLess>& terms() const { return coef_; }

    /// nu(s): the lex-smallest exponent with nonzero coefficient.
    /// The defining property nu(s1 s2) = nu(s1) + nu(s2) is what makes the
    /// image a semigroup; see the multiplicativity test.
    Exponent valuation() const {
        if (coef_.empty()) throw ZeroSectionError();
        return coef_.begin()->first;
    }

    Rational leading_coefficient() const {
        if (coef_.empty()) throw ZeroSectionError();
        return coef_.begin()->second;
    }

    Section operator+(const Section& o) const {
        if (level_ != o.level_ || dim_ != o.dim_)
            throw std::invalid_argument("Section: cannot add sections of different level/dim");
        Section r = *this;
        for (const auto& [b, c] : o.coef_) r.set(b, r.coefficient(b) + c);
        return r;
    }

    Section scaled(const Rational& c) const {
        Section r(level_, dim_);
        if (c != 0)
            for (const auto& [b, a] : coef_) r.coef_[b] = a * c;
        return r;
    }

    /// Product of sections; levels add. Callers that carry a max level
    /// (ToricSeries::multiply) enforce it before delegating here.
    Section operator*(const Section& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("Section: dimension mismatch in product");
        Section r(level_ + o.level_, dim_);
        for (const auto& [b1, c1] : coef_)
            for (const auto& [b2, c2] : o.coef_) {
                Exponent b = b1 + b2;
                r.set(b, r.coefficient(b) + c1 * c2);
            }
        return r;
    }

private:
    int level_;
    int dim_;
    std::map<Exponent, Rational, LexLess> coef_;
};

}  // namespace chebvol
