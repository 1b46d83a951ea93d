#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace chebvol {

/// A monomial exponent in d variables: a lattice point of N^d.
/// Together with a level m it names the grid point beta/m of the Okounkov body.
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(std::vector<long long> e) : e_(std::move(e)) {
        for (long long c : e_)
            if (c < 0) throw std::invalid_argument("Exponent: entries must be >= 0");
    }
    static Exponent zero(int d) { return Exponent(std::vector<long long>(d, 0)); }

    int dim() const { return static_cast<int>(e_.size()); }
    long long operator[](int i) const { return e_[static_cast<size_t>(i)]; }
    const std::vector<long long>& entries() const { return e_; }

    /// Total degree |beta|.
    long long total() const { return std::accumulate(e_.begin(), e_.end(), 0LL); }

    Exponent operator+(const Exponent& o) const {
        check_dim(o);
        std::vector<long long> r(e_.size());
        for (size_t i = 0; i < e_.size(); ++i) r[i] = e_[i] + o.e_[i];
        return Exponent(std::move(r));
    }

    /// Lexicographic order on entries; this is the valuation order throughout.
    std::strong_ordering operator<=>(const Exponent& o) const {
        check_dim(o);
        for (size_t i = 0; i < e_.size(); ++i)
            if (auto c = e_[i] <=> o.e_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    bool operator==(const Exponent& o) const { return (*this <=> o) == 0; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < e_.size(); ++i) s += (i ? "," : "") + std::to_string(e_[i]);
        return s + ")";
    }

private:
    void check_dim(const Exponent& o) const {
        if (e_.size() != o.e_.size())
            throw std::invalid_argument("Exponent: dimension mismatch " + std::to_string(e_.size()) +
                                        " vs " + std::to_string(o.e_.size()));
    }
    std::vector<long long> e_;
};

struct LexLess {
    bool operator()(const Exponent& a, const Exponent& b) const { return a < b; }
};

}  // namespace chebvol
