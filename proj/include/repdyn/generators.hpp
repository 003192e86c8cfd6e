#pragma once

#include "repdyn/linalg.hpp"
#include "repdyn/wordspace.hpp"

#include <string>
#include <vector>

namespace repdyn {

// Images of the free generators under a representation rho: F_r -> GL(n, R),
// together with their inverses.
class GeneratorSet {
public:
    GeneratorSet(std::vector<std::string> names, std::vector<Matrix> images);
    explicit GeneratorSet(std::vector<Matrix> images);

    int rank() const { return static_cast<int>(images_.size()); }
    int dim() const { return images_.front().dim(); }
    const std::vector<std::string>& names() const { return names_; }
    const Matrix& image(Letter x) const;
    const std::vector<Matrix>& images() const { return images_; }

    GeneratorSet inverted() const;              // g_i -> g_i^{-1}
    GeneratorSet conjugated(const Matrix& h) const;  // g_i -> h g_i h^{-1}

private:
    std::vector<std::string> names_;
    std::vector<Matrix> images_;
    std::vector<Matrix> inverses_;
};

// rho(word), multiplied left to right; empty word gives the identity.
// NumericError carries the prefix length at which entries stopped being finite.
Matrix evaluate(const Word& word, const GeneratorSet& gens);

// rho(word) together with rho(word^{-1}) accumulated from generator inverses.
struct WordImage {
    Matrix value;
    Matrix inverse;
};
WordImage evaluate_pair(const Word& word, const GeneratorSet& gens);

}  // namespace repdyn
