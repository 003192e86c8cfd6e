#include "repdyn/wordspace.hpp"

#include "repdyn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace repdyn {

namespace {

constexpr std::uint64_t kSizeLimit = std::uint64_t{1} << 63;

void check_rank(int rank) {
    if (rank < 1) throw PreconditionError("rank must be at least 1");
}

// ∫_lo^hi (alpha + beta u) 2^{-u} du
double weighted_affine_integral(double alpha, double beta, double lo, double hi) {
    const double c = std::log(2.0);
    auto primitive = [&](double u) {
        const double e = std::exp2(-u);
        return -alpha * e / c + beta * (-u * e / c - e / (c * c));
    };
    return primitive(hi) - primitive(lo);
}

// Exact integral of d(s) 2^{-|s|} over [t, t+1] for d affine between the
// integer samples, or V-shaped when the two geodesics swap across an edge.
double unit_interval_integral(int t, double d0, double d1, bool crossing) {
    // Map to u in [0, 1] measured away from the origin, |s| = e + u.
    double e, near, far;
    if (t >= 0) {
        e = t;
        near = d0;
        far = d1;
    } else {
        e = -(t + 1);
        near = d1;
        far = d0;
    }
    const double scale = std::exp2(-e);
    if (!crossing) return scale * weighted_affine_integral(near, far - near, 0.0, 1.0);
    // d = |1 - 2u|
    return scale * (weighted_affine_integral(1.0, -2.0, 0.0, 0.5) +
                    weighted_affine_integral(-1.0, 2.0, 0.5, 1.0));
}

}  // namespace

// --- Word --------------------------------------------------------------------

bool is_reduced(const std::vector<Letter>& letters) {
    for (std::size_t i = 1; i < letters.size(); ++i)
        if (letters[i] == letters[i - 1].inverse()) return false;
    return true;
}

Word::Word(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {
    check_rank(rank_);
    for (Letter x : letters_)
        if (x.code() < 0 || x.code() >= 2 * rank_)
            throw PreconditionError("letter code " + std::to_string(x.code()) + " out of range for rank " +
                                    std::to_string(rank_));
    if (!is_reduced(letters_)) throw PreconditionError("word is not reduced");
}

std::vector<std::string> default_generator_names(int rank) {
    std::vector<std::string> names;
    for (int i = 0; i < rank; ++i) names.push_back("g" + std::to_string(i + 1));
    return names;
}

Word Word::parse(const std::string& text, const std::vector<std::string>& names) {
    const int rank = static_cast<int>(names.size());
    std::vector<Letter> letters;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        bool inverted = false;
        std::string base = token;
        if (base.size() > 3 && base.compare(base.size() - 3, 3, "^-1") == 0) {
            inverted = true;
            base.resize(base.size() - 3);
        }
        auto it = std::find(names.begin(), names.end(), base);
        if (it == names.end() && !inverted && base.size() == 1 &&
            std::isupper(static_cast<unsigned char>(base[0]))) {
            const std::string lower(1, static_cast<char>(std::tolower(static_cast<unsigned char>(base[0]))));
            it = std::find(names.begin(), names.end(), lower);
            inverted = it != names.end();
        }
        if (it == names.end()) throw PreconditionError("unknown generator '" + token + "'");
        letters.push_back(Letter::generator(static_cast<int>(it - names.begin()), inverted));
    }
    return Word(rank, std::move(letters));
}

Word Word::inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return Word(rank_, std::move(out));
}

bool Word::is_cyclically_reduced() const {
    return letters_.size() < 2 || letters_.front() != letters_.back().inverse();
}

Word Word::times(Letter x) const {
    Word out = *this;
    if (!out.letters_.empty() && out.letters_.back() == x.inverse())
        out.letters_.pop_back();
    else
        out.letters_.push_back(x);
    return out;
}

Word Word::times(const Word& other) const {
    Word out = *this;
    for (Letter x : other.letters_) {
        if (!out.letters_.empty() && out.letters_.back() == x.inverse())
            out.letters_.pop_back();
        else
            out.letters_.push_back(x);
    }
    return out;
}

std::string Word::to_string(const std::vector<std::string>& names) const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += ' ';
        out += names.at(static_cast<std::size_t>(letters_[i].generator_index()));
        if (letters_[i].is_inverse()) out += "^-1";
    }
    return out;
}

// --- enumeration -------------------------------------------------------------

std::uint64_t sphere_size(int rank, int length) {
    check_rank(rank);
    if (length < 0) throw PreconditionError("length must be nonnegative");
    if (length == 0) return 1;
    std::uint64_t count = 2 * static_cast<std::uint64_t>(rank);
    const std::uint64_t branch = count - 1;
    for (int i = 1; i < length; ++i) {
        if (branch != 0 && count > (kSizeLimit - 1) / branch)
            throw SizeError("sphere of length " + std::to_string(length) + " in F_" +
                            std::to_string(rank) + " exceeds 2^63 words");
        count *= branch;
    }
    return count;
}

std::uint64_t ball_size(int rank, int length) {
    std::uint64_t total = 0;
    for (int l = 0; l <= length; ++l) {
        const std::uint64_t s = sphere_size(rank, l);
        if (total > kSizeLimit - s) throw SizeError("ball exceeds 2^63 words");
        total += s;
    }
    return total;
}

SphereEnumerator::SphereEnumerator(int rank, int length, std::optional<Letter> first)
    : rank_(rank), length_(length), first_(first) {
    check_rank(rank);
    if (length < 0) throw PreconditionError("length must be nonnegative");
    (void)sphere_size(rank, length);
    if (first && (first->code() < 0 || first->code() >= 2 * rank))
        throw PreconditionError("first letter out of range");
    if (first && length == 0) done_ = true;
}

bool SphereEnumerator::advance() {
    const int alphabet = 2 * rank_;
    auto smallest_after = [&](std::size_t pos, int from) -> int {
        for (int c = from; c < alphabet; ++c)
            if (pos == 0 || Letter(c) != current_[pos - 1].inverse()) return c;
        return -1;
    };
    auto fill_from = [&](std::size_t pos) {
        for (std::size_t i = pos; i < current_.size(); ++i) current_[i] = Letter(smallest_after(i, 0));
    };

    if (!started_) {
        started_ = true;
        current_.assign(static_cast<std::size_t>(length_), Letter(0));
        if (length_ == 0) return true;
        current_[0] = first_ ? *first_ : Letter(0);
        fill_from(1);
        return true;
    }
    if (length_ == 0) return false;
    const std::size_t lowest = first_ ? 1 : 0;
    for (std::size_t pos = current_.size(); pos-- > lowest;) {
        const int c = smallest_after(pos, current_[pos].code() + 1);
        if (c >= 0) {
            current_[pos] = Letter(c);
            fill_from(pos + 1);
            return true;
        }
    }
    return false;
}

std::optional<Word> SphereEnumerator::next() {
    if (done_) return std::nullopt;
    if (!advance()) {
        done_ = true;
        return std::nullopt;
    }
    return Word(rank_, current_);
}

std::vector<Word> enumerate_sphere(int rank, int length) {
    std::vector<Word> out;
    out.reserve(static_cast<std::size_t>(sphere_size(rank, length)));
    SphereEnumerator it(rank, length);
    while (auto w = it.next()) out.push_back(std::move(*w));
    return out;
}

Word random_word(int rank, int length, std::uint64_t seed) {
    check_rank(rank);
    if (length < 0) throw PreconditionError("length must be nonnegative");
    std::mt19937_64 rng(seed);
    std::vector<Letter> letters;
    letters.reserve(static_cast<std::size_t>(length));
    std::uniform_int_distribution<int> first(0, 2 * rank - 1);
    std::uniform_int_distribution<int> rest(0, 2 * rank - 2);
    for (int i = 0; i < length; ++i) {
        if (i == 0) {
            letters.emplace_back(first(rng));
            continue;
        }
        // Skip over the cancelling letter.
        int c = rest(rng);
        if (c >= letters.back().inverse().code()) ++c;
        letters.emplace_back(c);
    }
    return Word(rank, std::move(letters));
}

// --- BoundaryPoint -----------------------------------------------------------

BoundaryPoint::BoundaryPoint(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (prefix_.rank() != period_.rank()) throw PreconditionError("rank mismatch in boundary point");
    if (!period_.empty()) {
        if (!period_.is_cyclically_reduced())
            throw PreconditionError("boundary period must be cyclically reduced");
        if (!prefix_.empty() && prefix_.letters().back() == period_[0].inverse())
            throw PreconditionError("boundary prefix and period cancel");
    }
}

Letter BoundaryPoint::at(std::size_t i) const {
    if (i < prefix_.length()) return prefix_[i];
    if (period_.empty()) throw WindowBoundsError("finite ray exhausted at index " + std::to_string(i));
    return period_[(i - prefix_.length()) % period_.length()];
}

Word BoundaryPoint::truncate(std::size_t depth) const {
    std::vector<Letter> out;
    out.reserve(depth);
    for (std::size_t i = 0; i < depth; ++i) out.push_back(at(i));
    return Word(rank(), std::move(out));
}

bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.rank() != b.rank()) return false;
    if (a.period_.empty() || b.period_.empty()) {
        // Finite rays compare as words.
        return a.period_.empty() && b.period_.empty() && a.prefix_ == b.prefix_;
    }
    const std::size_t horizon =
        std::max(a.prefix_.length(), b.prefix_.length()) + a.period_.length() * b.period_.length();
    for (std::size_t i = 0; i < horizon; ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

// --- FlowLineWindow ----------------------------------------------------------

FlowLineWindow::FlowLineWindow(int rank, std::vector<Letter> letters, int half_width, int offset)
    : rank_(rank), letters_(std::move(letters)), half_width_(half_width), offset_(offset) {
    check_rank(rank_);
    if (half_width_ < 0) throw PreconditionError("half width must be nonnegative");
    if (letters_.size() != 2 * static_cast<std::size_t>(half_width_))
        throw PreconditionError("flow line window needs exactly 2T letters");
    if (std::abs(offset_) > half_width_) throw WindowBoundsError("offset outside window");
    for (Letter x : letters_)
        if (x.code() < 0 || x.code() >= 2 * rank_) throw PreconditionError("letter out of range");
    if (!is_reduced(letters_)) throw PreconditionError("flow line letters are not reduced");
}

FlowLineWindow FlowLineWindow::periodic(const Word& period, int half_width) {
    if (period.empty()) throw PreconditionError("period must be nonempty");
    if (!period.is_cyclically_reduced()) throw PreconditionError("period must be cyclically reduced");
    const auto p = static_cast<long>(period.length());
    std::vector<Letter> letters;
    for (long i = -half_width; i < half_width; ++i) letters.push_back(period[static_cast<std::size_t>(((i % p) + p) % p)]);
    return FlowLineWindow(period.rank(), std::move(letters), half_width);
}

FlowLineWindow FlowLineWindow::from_endpoints(const BoundaryPoint& backward, const BoundaryPoint& forward,
                                              int half_width) {
    if (backward.rank() != forward.rank()) throw PreconditionError("rank mismatch");
    std::vector<Letter> letters;
    for (int i = half_width; i >= 1; --i) letters.push_back(backward.at(static_cast<std::size_t>(i - 1)).inverse());
    for (int i = 0; i < half_width; ++i) letters.push_back(forward.at(static_cast<std::size_t>(i)));
    return FlowLineWindow(forward.rank(), std::move(letters), half_width);
}

FlowLineWindow FlowLineWindow::random(int rank, int half_width, std::uint64_t seed) {
    const Word w = random_word(rank, 2 * half_width, seed);
    return FlowLineWindow(rank, w.letters(), half_width);
}

Letter FlowLineWindow::at(int i) const {
    if (i < -past() || i >= future())
        throw WindowBoundsError("index " + std::to_string(i) + " outside flow line window");
    return letters_[static_cast<std::size_t>(i + offset_ + half_width_)];
}

FlowLineWindow shift_flow(const FlowLineWindow& line, int t) {
    const long offset = static_cast<long>(line.offset()) + t;
    if (std::abs(offset) > line.half_width())
        throw WindowBoundsError("shift by " + std::to_string(t) + " exhausts the flow line window");
    return FlowLineWindow(line.rank(), line.raw_letters(), line.half_width(), static_cast<int>(offset));
}

// --- tree geodesics ----------------------------------------------------------

TreeGeodesic::TreeGeodesic(Word anchor, std::vector<Letter> forward, std::vector<Letter> backward)
    : anchor_(std::move(anchor)), forward_(std::move(forward)), backward_(std::move(backward)) {
    if (!is_reduced(forward_) || !is_reduced(backward_))
        throw PreconditionError("geodesic letter streams must be reduced");
    if (!forward_.empty() && !backward_.empty() && forward_[0] == backward_[0])
        throw PreconditionError("forward and backward rays backtrack at the anchor");
    for (Letter x : forward_)
        if (x.code() >= 2 * anchor_.rank()) throw PreconditionError("letter out of range");
    for (Letter x : backward_)
        if (x.code() >= 2 * anchor_.rank()) throw PreconditionError("letter out of range");
}

TreeGeodesic TreeGeodesic::from_line(const Word& anchor, const FlowLineWindow& line) {
    std::vector<Letter> forward, backward;
    for (int i = 0; i < line.future(); ++i) forward.push_back(line.at(i));
    for (int i = 1; i <= line.past(); ++i) backward.push_back(line.at(-i).inverse());
    return TreeGeodesic(anchor, std::move(forward), std::move(backward));
}

int TreeGeodesic::reach() const { return static_cast<int>(std::min(forward_.size(), backward_.size())); }

Word TreeGeodesic::vertex(int t) const {
    const auto& stream = t >= 0 ? forward_ : backward_;
    const auto steps = static_cast<std::size_t>(std::abs(t));
    if (steps > stream.size()) throw WindowBoundsError("geodesic undefined at time " + std::to_string(t));
    Word v = anchor_;
    for (std::size_t i = 0; i < steps; ++i) v = v.times(stream[i]);
    return v;
}

std::size_t tree_distance(const Word& u, const Word& v) {
    const auto& a = u.letters();
    const auto& b = v.letters();
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    return a.size() + b.size() - 2 * common;
}

FlowMetricValue flow_metric(const TreeGeodesic& g, const TreeGeodesic& h, int truncation) {
    if (truncation < 0) throw PreconditionError("truncation must be nonnegative");
    if (g.reach() < truncation || h.reach() < truncation)
        throw PreconditionError("geodesics must be defined on [-T, T]");
    const int n = 2 * truncation + 1;
    std::vector<Word> gv, hv;
    std::vector<double> d(static_cast<std::size_t>(n));
    gv.reserve(static_cast<std::size_t>(n));
    hv.reserve(static_cast<std::size_t>(n));
    for (int t = -truncation; t <= truncation; ++t) {
        gv.push_back(g.vertex(t));
        hv.push_back(h.vertex(t));
        d[static_cast<std::size_t>(t + truncation)] = static_cast<double>(tree_distance(gv.back(), hv.back()));
    }
    FlowMetricValue out;
    for (int t = -truncation; t < truncation; ++t) {
        const auto i = static_cast<std::size_t>(t + truncation);
        const bool crossing = d[i] == 1.0 && d[i + 1] == 1.0 && gv[i] == hv[i + 1] && gv[i + 1] == hv[i];
        out.value += unit_interval_integral(t, d[i], d[i + 1], crossing);
    }
    // d(g(t), h(t)) <= d(g(0), h(0)) + 2|t| beyond the window.
    const double c = std::log(2.0);
    const double d0 = d[static_cast<std::size_t>(truncation)];
    const double tail = std::exp2(-static_cast<double>(truncation));
    out.tail_bound = 2.0 * (d0 * tail / c + 2.0 * tail * (truncation / c + 1.0 / (c * c)));
    return out;
}

}  // namespace repdyn
