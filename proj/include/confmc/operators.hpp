#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "confmc/dist.hpp"
#include "confmc/error.hpp"

namespace confmc {

inline constexpr std::size_t kDefaultBranchCap = 1'000'000;

/// Dirac (unit).
template <typename T>
Dist<T> eta(T x) {
    return Dist<T>::dirac(std::move(x));
}

/// Suppression (flattening): result(x) = sum_i a_i b_i(x).
template <typename T>
Dist<T> mu(Mixture<Dist<T>> const& dd) {
    typename Dist<T>::Map acc;
    for (auto const& c : dd.components) {
        for (auto const& [x, p] : c.value) {
            acc[x] += c.weight * p;
        }
    }
    return Dist<T>::from_map(std::move(acc));
}

template <typename T>
Dist<T> mu(Dist<Dist<T>> const& dd) {
    return mu(Mixture<Dist<T>>::of(dd));
}

namespace detail {

template <typename T>
struct LambdaInput {
    std::vector<Rat> outer;                              // a_i
    std::vector<std::vector<std::pair<T, Rat>>> inner;  // supp(b_i) with weights
    std::size_t branches = 1;
};

template <typename T>
LambdaInput<T> prepare_lambda(Mixture<Dist<T>> const& dd, std::size_t cap) {
    LambdaInput<T> in;
    for (auto const& c : dd.components) {
        if (c.weight == 0) {
            continue;
        }
        in.outer.push_back(c.weight);
        in.inner.emplace_back(c.value.begin(), c.value.end());
        std::size_t k = in.inner.back().size();
        if (k != 0 && in.branches > cap / k) {
            fail(ErrorKind::BranchExplosion, "MC2CM swap needs more than " + std::to_string(cap) + " branches");
        }
        in.branches *= k;
    }
    if (in.branches > cap) {
        fail(ErrorKind::BranchExplosion, "MC2CM swap needs more than " + std::to_string(cap) + " branches");
    }
    return in;
}

/// Accumulates the branches [first, last) of the mixed-radix enumeration of f in T^I.
template <typename T>
void lambda_range(LambdaInput<T> const& in, std::size_t first, std::size_t last,
                  typename Dist<Dist<T>>::Map& acc) {
    std::size_t n = in.outer.size();
    std::vector<std::size_t> digit(n, 0);
    std::size_t rest = first;
    for (std::size_t i = n; i-- > 0;) {
        digit[i] = rest % in.inner[i].size();
        rest /= in.inner[i].size();
    }
    for (std::size_t branch = first; branch < last; ++branch) {
        Rat weight = 1;
        typename Dist<T>::Map image;
        for (std::size_t i = 0; i < n; ++i) {
            auto const& [x, p] = in.inner[i][digit[i]];
            weight *= p;
            image[x] += in.outer[i];
        }
        acc[Dist<T>::from_map(std::move(image))] += weight;
        for (std::size_t i = n; i-- > 0;) {
            if (++digit[i] < in.inner[i].size()) {
                break;
            }
            digit[i] = 0;
        }
    }
}

}  // namespace detail

/// MC2CM swap, single-threaded reference:
///   sum_i a_i |b_i>  ->  sum_{f in T^I} (prod_i b_i(f(i))) | sum_i a_i |f(i)> >.
/// I ranges over the components of the mixture; equal images are merged.
template <typename T>
Dist<Dist<T>> lambda_op_serial(Mixture<Dist<T>> const& dd, std::size_t cap = kDefaultBranchCap) {
    auto in = detail::prepare_lambda(dd, cap);
    typename Dist<Dist<T>>::Map acc;
    detail::lambda_range(in, 0, in.branches, acc);
    return Dist<Dist<T>>::from_map(std::move(acc));
}

/// Same result as lambda_op_serial; branches are split into contiguous
/// chunks over OpenMP threads and the per-thread maps are summed afterwards.
template <typename T>
Dist<Dist<T>> lambda_op(Mixture<Dist<T>> const& dd, std::size_t cap = kDefaultBranchCap) {
    auto in = detail::prepare_lambda(dd, cap);
    typename Dist<Dist<T>>::Map acc;
#ifdef _OPENMP
    constexpr std::size_t kParallelThreshold = 256;
    if (in.branches >= kParallelThreshold && omp_get_max_threads() > 1) {
        std::vector<typename Dist<Dist<T>>::Map> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
        {
            auto nt = static_cast<std::size_t>(omp_get_num_threads());
            auto tid = static_cast<std::size_t>(omp_get_thread_num());
            std::size_t chunk = (in.branches + nt - 1) / nt;
            std::size_t first = std::min(in.branches, tid * chunk);
            std::size_t last = std::min(in.branches, first + chunk);
            detail::lambda_range(in, first, last, partial[tid]);
        }
        for (auto& part : partial) {
            for (auto& [d, w] : part) {
                acc[d] += w;
            }
        }
        return Dist<Dist<T>>::from_map(std::move(acc));
    }
#endif
    detail::lambda_range(in, 0, in.branches, acc);
    return Dist<Dist<T>>::from_map(std::move(acc));
}

template <typename T>
Dist<Dist<T>> lambda_op(Dist<Dist<T>> const& dd, std::size_t cap = kDefaultBranchCap) {
    return lambda_op(Mixture<Dist<T>>::of(dd), cap);
}

}  // namespace confmc
