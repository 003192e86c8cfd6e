#pragma once
//
// Affine holonomy checks: det(rho(g) - I) over word spheres, unit-modulus
// eigenvalues, and boundedness of the smallest |log a_i|.
//

#include "repdyn/fitting.hpp"
#include "repdyn/generators.hpp"
#include "repdyn/scan.hpp"

#include <optional>
#include <string>
#include <vector>

namespace repdyn {

// x -> A x + v
struct AffineMap {
    Matrix linear;
    Vec translation;

    AffineMap(Matrix a, Vec v);
    static AffineMap identity(int n);

    int dim() const { return linear.dim(); }
    AffineMap inverse() const;
    Vec apply(const Vec& x) const { return linear.data() * x + translation; }
};

// (A1, v1) o (A2, v2) = (A1 A2, A1 v2 + v1)
AffineMap compose(const AffineMap& f, const AffineMap& g);

class AffineGeneratorSet {
public:
    AffineGeneratorSet(std::vector<std::string> names, std::vector<AffineMap> maps);
    explicit AffineGeneratorSet(std::vector<AffineMap> maps);

    int rank() const { return static_cast<int>(maps_.size()); }
    int dim() const { return linear_.dim(); }
    const std::vector<AffineMap>& maps() const { return maps_; }
    const AffineMap& image(Letter x) const;
    // Linear parts; the projection to GL(n, R) is a homomorphism.
    const GeneratorSet& linear() const { return linear_; }

    AffineGeneratorSet conjugated(const AffineMap& h) const;  // g -> h g h^{-1}

private:
    std::vector<AffineMap> maps_;
    std::vector<AffineMap> inverses_;
    GeneratorSet linear_;
};

// Composition left to right, matching evaluate() on linear parts.
AffineMap evaluate(const Word& word, const AffineGeneratorSet& gens);

struct SphereMaximum {
    int length = 0;
    std::uint64_t words = 0;
    double max = 0.0;
    Word argmax;
};

inline constexpr double kHksTol = 1e-8;

struct HksReport {
    bool pass = false;
    double max_normalized = 0.0;  // max |det(rho(g) - I)| / (1 + |rho(g)|_op)^n
    std::optional<Word> worst_word;
    std::vector<SphereMaximum> spheres;  // L = 0 .. last complete
    bool truncated = false;
};

HksReport hks_test(const AffineGeneratorSet& gens, int max_length, const ScanPolicy& policy,
                   int threads = default_thread_count());

// |det(m - I)| / (1 + |m|_op)^n
double normalized_hks_determinant(const Mat& m);

// Eigenvalue moduli of long products carry absolute errors near eps * |m|,
// so the default tolerance sits well above rounding.
inline constexpr double kNormOneDefaultTol = 1e-6;

struct NormOneReport {
    bool pass = false;
    double tol = 0.0;
    double worst = 0.0;  // max over words of min_i |log λ_i|
    std::optional<Word> worst_word;
    int first_failure_length = 0;  // 0 when every word passes
    std::vector<SphereMaximum> spheres;  // L = 1 .. last complete
    bool truncated = false;
};

NormOneReport eigenvalue_norm_one_check(const GeneratorSet& gens, int max_length, double tol,
                                        const ScanPolicy& policy, int threads = default_thread_count());

struct BoundedSingularReport {
    bool pass = false;
    double c_hat = 0.0;  // max over words of min_i |log a_i|
    std::optional<LineFit> fit;  // per-sphere maxima against L
    std::vector<SphereMaximum> spheres;
    bool truncated = false;
};

// Slopes at or below this magnitude count as a plateau even when the fit
// residuals vanish and the confidence interval collapses to a point.
inline constexpr double kPlateauSlopeTol = 1e-9;

BoundedSingularReport bounded_singular_check(const GeneratorSet& gens, int max_length, const ScanPolicy& policy,
                                             int threads = default_thread_count());

}  // namespace repdyn
