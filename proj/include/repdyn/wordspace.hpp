#pragma once
//
// Free group F_r: reduced words, sphere enumeration, flow lines in the
// Cayley tree, and the weighted-integral metric on tree geodesics.
//
// Letter codes: 2*i is the i-th generator, 2*i+1 its inverse. Sphere
// enumeration is lexicographic in these codes.
//

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace repdyn {

class Letter {
public:
    constexpr Letter() = default;
    constexpr explicit Letter(int code) : code_(code) {}
    static constexpr Letter generator(int index, bool inverted = false) {
        return Letter(2 * index + (inverted ? 1 : 0));
    }

    constexpr int code() const { return code_; }
    constexpr int generator_index() const { return code_ / 2; }
    constexpr bool is_inverse() const { return (code_ & 1) != 0; }
    constexpr Letter inverse() const { return Letter(code_ ^ 1); }

    friend constexpr bool operator==(Letter, Letter) = default;
    friend constexpr auto operator<=>(Letter, Letter) = default;

private:
    int code_ = 0;
};

// Reduced word over {g_1, g_1^-1, ..., g_r, g_r^-1}.
class Word {
public:
    Word() = default;
    explicit Word(int rank) : rank_(rank) {}
    // Throws PreconditionError if not reduced or a letter is out of range.
    Word(int rank, std::vector<Letter> letters);

    // Tokens separated by whitespace; "x^-1" or "X" (uppercase of a
    // lowercase single-letter name) denotes an inverse.
    static Word parse(const std::string& text, const std::vector<std::string>& names);

    int rank() const { return rank_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const;
    bool is_cyclically_reduced() const;
    // Free product with cancellation; never throws on cancellation.
    Word times(const Word& other) const;
    Word times(Letter x) const;

    std::string to_string(const std::vector<std::string>& names) const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    int rank_ = 0;
    std::vector<Letter> letters_;
};

bool is_reduced(const std::vector<Letter>& letters);
std::vector<std::string> default_generator_names(int rank);

// Number of reduced words of length L in F_r; SizeError past 2^63.
std::uint64_t sphere_size(int rank, int length);
std::uint64_t ball_size(int rank, int length);

// Lexicographic stream of the reduced words of length L, optionally
// restricted to a first letter (for partitioned parallel consumption).
class SphereEnumerator {
public:
    SphereEnumerator(int rank, int length, std::optional<Letter> first = std::nullopt);
    std::optional<Word> next();

private:
    bool advance();
    int rank_;
    int length_;
    std::optional<Letter> first_;
    std::vector<Letter> current_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<Word> enumerate_sphere(int rank, int length);

// Uniform reduced word of length L; deterministic given seed.
Word random_word(int rank, int length, std::uint64_t seed);

// prefix followed by period repeated forever. An empty period denotes a
// finite ray (only the prefix is available).
class BoundaryPoint {
public:
    BoundaryPoint(Word prefix, Word period);
    static BoundaryPoint periodic(const Word& period) { return BoundaryPoint(Word(period.rank()), period); }

    int rank() const { return prefix_.rank(); }
    const Word& prefix() const { return prefix_; }
    const Word& period() const { return period_; }
    Letter at(std::size_t i) const;
    Word truncate(std::size_t depth) const;

    // Equality as infinite words.
    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b);

private:
    Word prefix_;
    Word period_;
};

// Letters x_i of a bi-infinite reduced word for i in [-T, T-1]; letter x_i
// joins vertex i to vertex i+1. `offset` records accumulated shifts.
class FlowLineWindow {
public:
    FlowLineWindow(int rank, std::vector<Letter> letters, int half_width, int offset = 0);

    static FlowLineWindow periodic(const Word& period, int half_width);
    // Line through the identity from `backward` (t -> -inf) to `forward`.
    static FlowLineWindow from_endpoints(const BoundaryPoint& backward, const BoundaryPoint& forward,
                                         int half_width);
    static FlowLineWindow random(int rank, int half_width, std::uint64_t seed);

    int rank() const { return rank_; }
    int half_width() const { return half_width_; }
    int offset() const { return offset_; }
    // Letters available at negative / nonnegative relative indices.
    int past() const { return half_width_ + offset_; }
    int future() const { return half_width_ - offset_; }

    Letter at(int i) const;  // WindowBoundsError outside [-past, future-1]
    const std::vector<Letter>& raw_letters() const { return letters_; }

    friend bool operator==(const FlowLineWindow&, const FlowLineWindow&) = default;

private:
    int rank_;
    std::vector<Letter> letters_;
    int half_width_;
    int offset_;
};

FlowLineWindow shift_flow(const FlowLineWindow& line, int t);

// Unit-speed geodesic in the Cayley tree of F_r. vertex(0) = anchor,
// vertex(t) = anchor * forward[0..t) for t > 0 and
// vertex(-t) = anchor * backward[0..t) for t > 0 (both freely reduced).
class TreeGeodesic {
public:
    TreeGeodesic(Word anchor, std::vector<Letter> forward, std::vector<Letter> backward);
    static TreeGeodesic from_line(const Word& anchor, const FlowLineWindow& line);

    int reach() const;  // largest T with vertex defined on [-T, T]
    Word vertex(int t) const;
    const Word& anchor() const { return anchor_; }

private:
    Word anchor_;
    std::vector<Letter> forward_;
    std::vector<Letter> backward_;
};

std::size_t tree_distance(const Word& u, const Word& v);

struct FlowMetricValue {
    double value = 0.0;       // integral over [-T, T]
    double tail_bound = 0.0;  // bound on the omitted |t| > T part
};

FlowMetricValue flow_metric(const TreeGeodesic& g, const TreeGeodesic& h, int truncation);

}  // namespace repdyn
