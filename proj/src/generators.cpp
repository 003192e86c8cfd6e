#include "repdyn/generators.hpp"

#include "repdyn/errors.hpp"

namespace repdyn {

GeneratorSet::GeneratorSet(std::vector<std::string> names, std::vector<Matrix> images)
    : names_(std::move(names)), images_(std::move(images)) {
    if (images_.empty()) throw PreconditionError("generator set must be nonempty");
    if (names_.size() != images_.size()) throw PreconditionError("one name per generator required");
    for (const auto& m : images_) {
        if (m.dim() != images_.front().dim())
            throw PreconditionError("generators must share one dimension");
        if (!is_invertible(m.data())) throw DegenerateInputError("generator is numerically singular");
        inverses_.push_back(m.inverse());
    }
}

GeneratorSet::GeneratorSet(std::vector<Matrix> images)
    : GeneratorSet(default_generator_names(static_cast<int>(images.size())), images) {}

const Matrix& GeneratorSet::image(Letter x) const {
    const auto i = static_cast<std::size_t>(x.generator_index());
    if (i >= images_.size()) throw PreconditionError("letter out of range for generator set");
    return x.is_inverse() ? inverses_[i] : images_[i];
}

GeneratorSet GeneratorSet::inverted() const { return GeneratorSet(names_, inverses_); }

GeneratorSet GeneratorSet::conjugated(const Matrix& h) const {
    const Matrix h_inv = h.inverse();
    std::vector<Matrix> out;
    for (const auto& m : images_) out.push_back(Matrix(h.data() * m.data() * h_inv.data()));
    return GeneratorSet(names_, std::move(out));
}

namespace {

Mat product(const Word& word, const GeneratorSet& gens) {
    if (word.rank() != gens.rank() && !word.empty())
        throw PreconditionError("word alphabet does not match generator set rank");
    Mat m = Mat::Identity(gens.dim(), gens.dim());
    for (std::size_t i = 0; i < word.length(); ++i) {
        m = m * gens.image(word[i]).data();
        if (!m.allFinite())
            throw NumericError("non-finite product after prefix of length " + std::to_string(i + 1), i + 1);
    }
    return m;
}

}  // namespace

Matrix evaluate(const Word& word, const GeneratorSet& gens) { return Matrix::trusted(product(word, gens)); }

WordImage evaluate_pair(const Word& word, const GeneratorSet& gens) {
    return {Matrix::trusted(product(word, gens)), Matrix::trusted(product(word.inverse(), gens))};
}

}  // namespace repdyn
