#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "arch_metric.hpp"
#include "nonarch.hpp"
#include "toric_series.hpp"

namespace chebvol {

/// A place of Q: p = 0 denotes the archimedean place, otherwise the prime.
struct Place {
    long long p = 0;
    bool archimedean() const { return p == 0; }
    bool operator<(const Place& o) const { return p < o.p; }
    bool operator==(const Place& o) const { return p == o.p; }
};

/// Adelically metrized line bundle data on a toric variety over Q: a graded
/// linear series, one archimedean metric, finitely many nontrivial
/// finite-place weights, and an optional rational rescaling q of the
/// trivializing section (replacing s by q^{-m} s place-by-place; the product
/// formula makes the global invariants blind to it).
class AdelicBundle {
public:
    AdelicBundle(ToricSeries series, ArchMetric arch, std::vector<NonArchWeight> finite = {},
                 Rational trivialization_scale = 1)
        : series_(std::move(series)),
          arch_(std::move(arch)),
          finite_(std::move(finite)),
          scale_(std::move(trivialization_scale)) {
        if (arch_.dim() != series_.dimension())
            throw std::invalid_argument("AdelicBundle: metric/series dimension mismatch");
        std::map<long long, int> seen;
        for (const auto& w : finite_) {
            if (w.dim() != series_.dimension())
                throw std::invalid_argument("AdelicBundle: weight dimension mismatch");
            if (++seen[w.prime()] > 1)
                throw std::invalid_argument("AdelicBundle: duplicate weight for prime " +
                                            std::to_string(w.prime()));
        }
        if (scale_ == 0) throw std::invalid_argument("AdelicBundle: zero trivialization scale");
        arch_.check_growth(series_.polytope());
    }

    const ToricSeries& series() const { return series_; }
    const ArchMetric& arch() const { return arch_; }
    const std::vector<NonArchWeight>& finite() const { return finite_; }
    const Rational& trivialization_scale() const { return scale_; }

    const NonArchWeight* weight_at(long long p) const {
        for (const auto& w : finite_)
            if (w.prime() == p) return &w;
        return nullptr;
    }

    /// Places where the metric differs from the trivial model one, plus the
    /// archimedean place (always metrized).
    std::vector<Place> places() const {
        std::vector<Place> ps{{0}};
        for (const auto& w : finite_)
            if (!w.is_trivial() || padic_valuation_nonzero(w.prime())) ps.push_back({w.prime()});
        for (long long p : scale_primes())
            if (!weight_at(p)) ps.push_back({p});
        std::sort(ps.begin(), ps.end());
        return ps;
    }

    /// Tensor power: polytope, weights, and metrics all scale by k.
    AdelicBundle power(int k) const {
        std::vector<NonArchWeight> f;
        for (const auto& w : finite_) f.push_back(w.scaled(k));
        Rational q = 1;
        for (int i = 0; i < k; ++i) q *= scale_;
        return AdelicBundle(series_.power(k), arch_.scaled(k), std::move(f), q);
    }

    /// Tensor product: polytopes Minkowski-add, archimedean weights add,
    /// finite-place roofs sup-convolve (see NonArchWeight).
    AdelicBundle tensor(const AdelicBundle& o) const {
        std::vector<NonArchWeight> f;
        std::map<long long, const NonArchWeight*> mine, theirs;
        for (const auto& w : finite_) mine[w.prime()] = &w;
        for (const auto& w : o.finite_) theirs[w.prime()] = &w;
        for (const auto& [p, w] : mine) {
            auto it = theirs.find(p);
            if (it == theirs.end())
                f.push_back(sup_convolution(*w, series_.polytope(),
                                            NonArchWeight::trivial(p, w->dim()), o.series_.polytope()));
            else
                f.push_back(sup_convolution(*w, series_.polytope(), *it->second, o.series_.polytope()));
        }
        for (const auto& [p, w] : theirs)
            if (!mine.count(p))
                f.push_back(sup_convolution(NonArchWeight::trivial(p, w->dim()), series_.polytope(),
                                            *w, o.series_.polytope()));
        return AdelicBundle(series_.tensor(o.series_), arch_.plus(o.arch_), std::move(f),
                            scale_ * o.scale_);
    }

    AdelicBundle with_trivialization_scale(const Rational& q) const {
        return AdelicBundle(series_, arch_, finite_, q);
    }

    std::vector<long long> scale_primes() const {
        std::vector<long long> ps;
        BigInt n = num(scale_) < 0 ? BigInt(-num(scale_)) : num(scale_);
        BigInt d = den(scale_);
        for (BigInt v : {n, d}) {
            for (long long p = 2; p * p <= v; ++p)
                while (v % p == 0) {
                    if (ps.empty() || ps.back() != p) ps.push_back(p);
                    v /= p;
                }
            if (v > 1) ps.push_back(v.template convert_to<long long>());
        }
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        return ps;
    }

private:
    bool padic_valuation_nonzero(long long p) const {
        return scale_ != 1 && padic_valuation(scale_, p) != 0;
    }

    ToricSeries series_;
    ArchMetric arch_;
    std::vector<NonArchWeight> finite_;
    Rational scale_;
};

}  // namespace chebvol
