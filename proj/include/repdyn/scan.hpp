#pragma once
//
// Parallel traversal of balls in F_r with prefix-product evaluation.
//
// Work is split into a fixed number of partitions (one per first letter),
// independent of the thread count, and results are returned in partition
// order, so reductions that are merged in that order are bit-reproducible
// for any degree of parallelism.
//

#include "repdyn/errors.hpp"
#include "repdyn/generators.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace repdyn {

inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 24;

struct ScanPolicy {
    enum class Kind { exhaustive, sampled };
    Kind kind = Kind::exhaustive;
    std::size_t samples = 0;  // words per sphere when sampled
    std::uint64_t seed = 0;

    static ScanPolicy exhaustive() { return {}; }
    static ScanPolicy sampled(std::size_t count, std::uint64_t seed) {
        return {Kind::sampled, count, seed};
    }
    bool is_exhaustive() const { return kind == Kind::exhaustive; }
};

std::string describe(const ScanPolicy& policy);

// REPDYN_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

struct ScanVisit {
    std::span<const Letter> letters;
    const Mat& value;    // rho(word)
    const Mat& inverse;  // rho(word^{-1})
    bool sampled;        // true when the word came from the sampler
};

template <class Acc>
struct ScanResult {
    std::vector<Acc> partitions;  // partition order
    int complete_length = 0;      // every sphere up to here was fully evaluated
    bool truncated = false;       // non-finite products cut the scan short
};

namespace detail {

template <class Acc, class Visit>
struct Walker {
    const GeneratorSet& gens;
    int min_length;
    int max_length;
    Visit& visit;
    std::vector<Letter> letters;
    int overflow_length;

    void descend(Acc& acc, const Mat& value, const Mat& inverse) {
        const int len = static_cast<int>(letters.size());
        if (len >= min_length) visit(acc, ScanVisit{letters, value, inverse, false});
        if (len == max_length) return;
        for (int c = 0; c < 2 * gens.rank(); ++c) {
            const Letter x(c);
            if (!letters.empty() && letters.back() == x.inverse()) continue;
            Mat next = value * gens.image(x).data();
            Mat next_inv = gens.image(x.inverse()).data() * inverse;
            if (!next.allFinite() || !next_inv.allFinite()) {
                overflow_length = std::min(overflow_length, len + 1);
                continue;
            }
            letters.push_back(x);
            descend(acc, next, next_inv);
            letters.pop_back();
        }
    }
};

template <class Fn>
void run_partitions(int partitions, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, partitions));
    if (threads == 1) {
        for (int p = 0; p < partitions; ++p) fn(p);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int p = next++; p < partitions; p = next++) fn(p);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Calls visit(acc, ScanVisit) for every word with min_length <= |w| <= max_length
// (exhaustive) or for `samples` random words per length (sampled).
template <class Acc, class Visit>
ScanResult<Acc> scan_words(const GeneratorSet& gens, int min_length, int max_length, const ScanPolicy& policy,
                           int threads, Visit visit) {
    if (min_length < 0 || max_length < min_length) throw PreconditionError("invalid scan length range");
    const int partitions = 2 * gens.rank();
    ScanResult<Acc> result;
    result.partitions.resize(static_cast<std::size_t>(partitions));
    std::vector<int> overflow(static_cast<std::size_t>(partitions), max_length + 1);
    const int n = gens.dim();
    const Mat identity = Mat::Identity(n, n);

    if (policy.is_exhaustive()) {
        if (ball_size(gens.rank(), max_length) > kEnumerationCap)
            throw SizeError("exhaustive scan to length " + std::to_string(max_length) +
                            " exceeds the enumeration cap; use the sampled policy");
        if (min_length == 0) visit(result.partitions[0], ScanVisit{{}, identity, identity, false});
        detail::run_partitions(partitions, threads, [&](int p) {
            if (max_length == 0) return;
            detail::Walker<Acc, Visit> walker{gens, std::max(min_length, 1), max_length, visit, {}, max_length + 1};
            const Letter x(p);
            walker.letters.push_back(x);
            const Mat& value = gens.image(x).data();
            const Mat& inverse = gens.image(x.inverse()).data();
            walker.descend(result.partitions[static_cast<std::size_t>(p)], value, inverse);
            overflow[static_cast<std::size_t>(p)] = walker.overflow_length;
        });
    } else {
        if (policy.samples == 0) throw PreconditionError("sampled policy needs a positive sample count");
        if (min_length == 0) visit(result.partitions[0], ScanVisit{{}, identity, identity, true});
        const std::size_t per = policy.samples;
        detail::run_partitions(partitions, threads, [&](int p) {
            auto& acc = result.partitions[static_cast<std::size_t>(p)];
            const std::size_t lo = per * static_cast<std::size_t>(p) / static_cast<std::size_t>(partitions);
            const std::size_t hi = per * static_cast<std::size_t>(p + 1) / static_cast<std::size_t>(partitions);
            for (int len = std::max(min_length, 1); len <= max_length; ++len) {
                for (std::size_t i = lo; i < hi; ++i) {
                    const Word w = random_word(gens.rank(), len, mix_seed(policy.seed, static_cast<std::uint64_t>(len), i));
                    Mat value = identity, inverse = identity;
                    bool finite = true;
                    for (std::size_t j = 0; j < w.length() && finite; ++j) {
                        value = value * gens.image(w[j]).data();
                        inverse = gens.image(w[j].inverse()).data() * inverse;
                        finite = value.allFinite() && inverse.allFinite();
                    }
                    if (!finite) {
                        overflow[static_cast<std::size_t>(p)] = std::min(overflow[static_cast<std::size_t>(p)], len);
                        continue;
                    }
                    visit(acc, ScanVisit{w.letters(), value, inverse, true});
                }
            }
        });
    }
    const int first_overflow = *std::min_element(overflow.begin(), overflow.end());
    result.truncated = first_overflow <= max_length;
    result.complete_length = result.truncated ? first_overflow - 1 : max_length;
    return result;
}

}  // namespace repdyn
