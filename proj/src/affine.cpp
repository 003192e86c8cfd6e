#include "repdyn/affine.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace repdyn {

AffineMap::AffineMap(Matrix a, Vec v) : linear(std::move(a)), translation(std::move(v)) {
    if (translation.size() != linear.dim()) throw PreconditionError("translation length must match dimension");
    if (!translation.allFinite()) throw PreconditionError("translation must be finite");
}

AffineMap AffineMap::identity(int n) { return AffineMap(Matrix::identity(n), Vec::Zero(n)); }

AffineMap AffineMap::inverse() const {
    Matrix a_inv = linear.inverse();
    Vec v = -(a_inv.data() * translation);
    return AffineMap(std::move(a_inv), std::move(v));
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    if (f.dim() != g.dim()) throw PreconditionError("affine maps of different dimension");
    return AffineMap(Matrix::trusted(f.linear.data() * g.linear.data()),
                     f.linear.data() * g.translation + f.translation);
}

namespace {

std::vector<Matrix> linear_parts(const std::vector<AffineMap>& maps) {
    std::vector<Matrix> out;
    for (const auto& f : maps) out.push_back(f.linear);
    return out;
}

}  // namespace

AffineGeneratorSet::AffineGeneratorSet(std::vector<std::string> names, std::vector<AffineMap> maps)
    : maps_(std::move(maps)), linear_(std::move(names), linear_parts(maps_)) {
    for (const auto& f : maps_) inverses_.push_back(f.inverse());
}

AffineGeneratorSet::AffineGeneratorSet(std::vector<AffineMap> maps)
    : AffineGeneratorSet(default_generator_names(static_cast<int>(maps.size())), maps) {}

const AffineMap& AffineGeneratorSet::image(Letter x) const {
    const auto i = static_cast<std::size_t>(x.generator_index());
    if (i >= maps_.size()) throw PreconditionError("letter out of range for generator set");
    return x.is_inverse() ? inverses_[i] : maps_[i];
}

AffineGeneratorSet AffineGeneratorSet::conjugated(const AffineMap& h) const {
    const AffineMap h_inv = h.inverse();
    std::vector<AffineMap> out;
    for (const auto& f : maps_) out.push_back(compose(compose(h, f), h_inv));
    return AffineGeneratorSet(linear_.names(), std::move(out));
}

AffineMap evaluate(const Word& word, const AffineGeneratorSet& gens) {
    if (word.rank() != gens.rank() && !word.empty())
        throw PreconditionError("word alphabet does not match generator set rank");
    AffineMap out = AffineMap::identity(gens.dim());
    for (std::size_t i = 0; i < word.length(); ++i) {
        out = compose(out, gens.image(word[i]));
        if (!out.translation.allFinite())
            throw NumericError("non-finite affine product after prefix of length " + std::to_string(i + 1), i + 1);
    }
    return out;
}

// --- sphere maxima -----------------------------------------------------------

namespace {

struct MaxAccumulator {
    std::uint64_t words = 0;
    double max = -std::numeric_limits<double>::infinity();
    std::vector<Letter> argmax;
};

struct SphereScan {
    std::vector<SphereMaximum> spheres;
    bool truncated = false;
};

template <class Score>
SphereScan sphere_maxima(const GeneratorSet& gens, int min_length, int max_length, const ScanPolicy& policy,
                         int threads, Score score) {
    using Acc = std::vector<MaxAccumulator>;
    auto visit = [&](Acc& acc, const ScanVisit& v) {
        if (acc.empty()) acc.resize(static_cast<std::size_t>(max_length) + 1);
        const double s = score(v.value, v.inverse);
        auto& a = acc[v.letters.size()];
        ++a.words;
        if (s > a.max) {
            a.max = s;
            a.argmax.assign(v.letters.begin(), v.letters.end());
        }
    };
    const auto scan = scan_words<Acc>(gens, min_length, max_length, policy, threads, visit);

    Acc merged(static_cast<std::size_t>(max_length) + 1);
    for (const auto& part : scan.partitions) {
        for (std::size_t l = 0; l < part.size(); ++l) {
            auto& m = merged[l];
            m.words += part[l].words;
            if (part[l].max > m.max) {
                m.max = part[l].max;
                m.argmax = part[l].argmax;
            }
        }
    }
    SphereScan out;
    out.truncated = scan.truncated;
    for (int l = min_length; l <= scan.complete_length; ++l) {
        const auto& m = merged[static_cast<std::size_t>(l)];
        if (m.words == 0) continue;
        out.spheres.push_back(SphereMaximum{l, m.words, m.max, Word(gens.rank(), m.argmax)});
    }
    return out;
}

const SphereMaximum* overall_max(const std::vector<SphereMaximum>& spheres) {
    const SphereMaximum* best = nullptr;
    for (const auto& s : spheres)
        if (!best || s.max > best->max) best = &s;
    return best;
}

}  // namespace

double normalized_hks_determinant(const Mat& m) {
    const auto n = m.rows();
    const double det = (m - Mat::Identity(n, n)).fullPivLu().determinant();
    if (det == 0.0) return 0.0;
    const double op = Eigen::JacobiSVD<Mat>(m).singularValues()[0];
    return std::exp(std::log(std::abs(det)) - static_cast<double>(n) * std::log1p(op));
}

HksReport hks_test(const AffineGeneratorSet& gens, int max_length, const ScanPolicy& policy, int threads) {
    if (max_length < 1) throw PreconditionError("HKS test needs L_max >= 1");
    const auto scan = sphere_maxima(gens.linear(), 0, max_length, policy, threads,
                                    [](const Mat& value, const Mat&) { return normalized_hks_determinant(value); });
    HksReport report;
    report.spheres = scan.spheres;
    report.truncated = scan.truncated;
    if (const auto* best = overall_max(report.spheres)) {
        report.max_normalized = best->max;
        report.worst_word = best->argmax;
    }
    report.pass = report.max_normalized <= kHksTol;
    return report;
}

NormOneReport eigenvalue_norm_one_check(const GeneratorSet& gens, int max_length, double tol,
                                        const ScanPolicy& policy, int threads) {
    if (max_length < 1) throw PreconditionError("eigenvalue check needs L_max >= 1");
    const auto scan = sphere_maxima(gens, 1, max_length, policy, threads, [](const Mat& value, const Mat& inverse) {
        const auto j = jordan_projection(Matrix::trusted(value), Matrix::trusted(inverse));
        return j.values().cwiseAbs().minCoeff();
    });
    NormOneReport report;
    report.tol = tol;
    report.spheres = scan.spheres;
    report.truncated = scan.truncated;
    if (const auto* best = overall_max(report.spheres)) {
        report.worst = best->max;
        report.worst_word = best->argmax;
    }
    for (const auto& s : report.spheres) {
        if (s.max > tol) {
            report.first_failure_length = s.length;
            break;
        }
    }
    report.pass = report.first_failure_length == 0;
    return report;
}

BoundedSingularReport bounded_singular_check(const GeneratorSet& gens, int max_length, const ScanPolicy& policy,
                                             int threads) {
    if (max_length < 1) throw PreconditionError("bounded singular check needs L_max >= 1");
    const auto scan = sphere_maxima(gens, 1, max_length, policy, threads, [](const Mat& value, const Mat& inverse) {
        const auto c = cartan_projection(Matrix::trusted(value), Matrix::trusted(inverse));
        return c.values().cwiseAbs().minCoeff();
    });
    BoundedSingularReport report;
    report.spheres = scan.spheres;
    report.truncated = scan.truncated;
    if (const auto* best = overall_max(report.spheres)) report.c_hat = best->max;
    std::vector<double> xs, ys;
    for (const auto& s : report.spheres) {
        xs.push_back(s.length);
        ys.push_back(s.max);
    }
    if (xs.size() >= 2) {
        report.fit = fit_line(xs, ys);
        report.pass = report.fit->slope_ci_contains_zero() || std::abs(report.fit->slope) <= kPlateauSlopeTol;
    } else {
        report.pass = !report.spheres.empty();
    }
    return report;
}

}  // namespace repdyn
