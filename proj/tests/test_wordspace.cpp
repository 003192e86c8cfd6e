#include "repdyn/errors.hpp"
#include "repdyn/generators.hpp"
#include "repdyn/wordspace.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>
#include <set>

using namespace repdyn;

namespace {

const std::vector<std::string> kAB{"a", "b"};

Word w(const std::string& text) { return Word::parse(text, kAB); }

}  // namespace

TEST_CASE("sphere sizes") {
    CHECK(sphere_size(2, 0) == 1);
    CHECK(sphere_size(2, 1) == 4);
    CHECK(sphere_size(2, 3) == 36);
    CHECK(sphere_size(1, 5) == 2);
    CHECK(ball_size(2, 2) == 1 + 4 + 12);
    CHECK_THROWS_AS(sphere_size(3, 60), SizeError);
}

TEST_CASE("sphere enumeration") {
    const auto words = enumerate_sphere(1, 5);
    REQUIRE(words.size() == 2);
    CHECK(words[0].to_string({"g"}) == "g g g g g");
    CHECK(words[1] == words[0].inverse());

    CHECK(enumerate_sphere(2, 1).size() == 4);
    CHECK(enumerate_sphere(2, 0).size() == 1);
    CHECK(enumerate_sphere(2, 0).front().empty());
}

TEST_CASE("property: enumerated spheres match brute-force counts and are distinct and reduced") {
    for (int r = 1; r <= 3; ++r) {
        for (int len = 0; len <= 8; ++len) {
            if (r == 3 && len > 6) continue;  // brute force over 6^L strings
            const auto words = enumerate_sphere(r, len);
            INFO("r " << r << " L " << len);
            CHECK(words.size() == testing::count_reduced_words(r, len));
            CHECK(words.size() == sphere_size(r, len));
            std::set<std::vector<int>> seen;
            for (const auto& word : words) {
                std::vector<int> codes;
                for (auto x : word.letters()) codes.push_back(x.code());
                CHECK(is_reduced(word.letters()));
                CHECK(word.length() == static_cast<std::size_t>(len));
                seen.insert(codes);
            }
            CHECK(seen.size() == words.size());
        }
    }
}

TEST_CASE("sphere enumeration is lexicographic and partitions by first letter") {
    const auto all = enumerate_sphere(2, 4);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].letters() < all[i].letters());
    std::size_t total = 0;
    for (int c = 0; c < 4; ++c) {
        SphereEnumerator e(2, 4, Letter(c));
        while (auto word = e.next()) {
            CHECK(word->letters().front() == Letter(c));
            ++total;
        }
    }
    CHECK(total == all.size());
}

TEST_CASE("word parsing and printing") {
    const Word x = w("a b^-1 A");
    CHECK(x.length() == 3);
    CHECK(x.to_string(kAB) == "a b^-1 a^-1");
    CHECK(w("a B A") == x);
    CHECK(x.inverse().to_string(kAB) == "a b a^-1");
    CHECK_THROWS_AS(w("a A"), PreconditionError);
    CHECK_THROWS_AS(w("c"), PreconditionError);
    CHECK(w("").empty());
}

TEST_CASE("free product cancels") {
    CHECK(w("a b").times(w("B a")) == w("a a"));
    CHECK(w("a b").times(w("B A")).empty());
    CHECK(w("a").times(Letter::generator(0, true)).empty());
    CHECK(w("a b A").is_cyclically_reduced() == false);
    CHECK(w("a b").is_cyclically_reduced());
}

TEST_CASE("random words") {
    CHECK(random_word(2, 0, 5).empty());
    CHECK(random_word(2, 12, 99) == random_word(2, 12, 99));
    CHECK_FALSE(random_word(2, 12, 99) == random_word(2, 12, 100));
    const Word long_word = random_word(2, 10000, 3);
    CHECK(long_word.length() == 10000);
    CHECK(is_reduced(long_word.letters()));
}

TEST_CASE("random words are roughly uniform on the first letter and extensions") {
    std::vector<int> first(4, 0), second(4, 0);
    for (std::uint64_t seed = 0; seed < 8000; ++seed) {
        const Word x = random_word(2, 2, seed);
        ++first[static_cast<std::size_t>(x[0].code())];
        if (x[0].code() == 0) ++second[static_cast<std::size_t>(x[1].code())];
    }
    for (int c : first) CHECK(std::abs(c - 2000) < 200);
    CHECK(second[1] == 0);
    for (int c : {0, 2, 3}) CHECK(std::abs(second[static_cast<std::size_t>(c)] - first[0] / 3) < 150);
}

TEST_CASE("evaluate") {
    const auto gens = testing::gens_of({testing::diag({2.0, 0.5}), testing::rotation_2d(0.3)});
    CHECK(evaluate(Word(2), gens).data() == Mat::Identity(2, 2));
    CHECK((evaluate(w("a a"), gens).data() - testing::diag({4.0, 0.25})).norm() == 0.0);
    CHECK_THROWS_AS(evaluate(Word::parse("a", {"a"}), gens), PreconditionError);
}

TEST_CASE("evaluate reports the prefix at which products overflow") {
    const auto gens = testing::gens_of({testing::diag({1e120, 1e110})});
    const Word x = Word::parse("g g g g", {"g"});
    try {
        evaluate(x, gens);
        FAIL("expected a numeric error");
    } catch (const NumericError& e) {
        CHECK(e.prefix_length == 3);
    }
}

TEST_CASE("property: evaluation is a homomorphism on reduced concatenations") {
    testing::Rng rng(31);
    const auto gens = testing::gens_of({testing::random_well_conditioned(rng, 3, 0.4),
                                        testing::random_well_conditioned(rng, 3, 0.4)});
    for (int trial = 0; trial < 200; ++trial) {
        const auto u = testing::random_letters(rng, 2, rng.integer(0, 6));
        auto v = testing::random_letters(rng, 2, rng.integer(0, 6));
        if (!u.empty() && !v.empty() && v.front() == u.back().inverse()) continue;
        std::vector<Letter> uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        const Mat lhs = evaluate(Word(2, uv), gens).data();
        const Mat rhs = evaluate(Word(2, u), gens).data() * evaluate(Word(2, v), gens).data();
        CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
        CHECK((lhs - testing::naive_product(gens, uv)).norm() <= 1e-9 * rhs.norm());
    }
}

TEST_CASE("property: evaluate of an inverse word is the inverse") {
    testing::Rng rng(32);
    const auto gens = testing::gens_of({testing::random_well_conditioned(rng, 3, 0.3),
                                        testing::random_well_conditioned(rng, 3, 0.3)});
    for (int trial = 0; trial < 200; ++trial) {
        const Word x(2, testing::random_letters(rng, 2, rng.integer(1, 10)));
        const Mat a = evaluate(x, gens).data();
        const Mat b = evaluate(x.inverse(), gens).data();
        CHECK((a * b - Mat::Identity(3, 3)).norm() < 1e-8 * a.norm() * b.norm());
        const auto pair = evaluate_pair(x, gens);
        CHECK((pair.inverse.data() - b).norm() <= 1e-12 * b.norm());
    }
}

TEST_CASE("flow line windows") {
    const Word period = w("a b");
    const auto line = FlowLineWindow::periodic(period, 4);
    CHECK(line.past() == 4);
    CHECK(line.future() == 4);
    for (int i = -4; i < 4; ++i) CHECK(line.at(i) == period[static_cast<std::size_t>(((i % 2) + 2) % 2)]);
    CHECK_THROWS_AS(line.at(4), WindowBoundsError);
    CHECK_THROWS_AS(line.at(-5), WindowBoundsError);
    CHECK_THROWS_AS(FlowLineWindow(2, {Letter(0), Letter(1)}, 1), PreconditionError);
    CHECK_THROWS_AS(FlowLineWindow::periodic(w("a b A"), 3), PreconditionError);
}

TEST_CASE("shift flow") {
    const auto line = FlowLineWindow::random(2, 20, 17);
    CHECK(shift_flow(line, 0) == line);
    CHECK(shift_flow(shift_flow(line, 5), -5) == line);
    CHECK(shift_flow(shift_flow(line, 3), 4) == shift_flow(line, 7));
    const auto shifted = shift_flow(line, 6);
    for (int i = -shifted.past(); i < shifted.future(); ++i) CHECK(shifted.at(i) == line.at(i + 6));
    CHECK_THROWS_AS(shift_flow(line, 21), WindowBoundsError);

    const Word u = w("a b a B");
    const auto periodic = FlowLineWindow::periodic(u, 12);
    const auto moved = shift_flow(periodic, static_cast<int>(u.length()));
    for (int i = -periodic.past(); i < moved.future(); ++i) CHECK(moved.at(i) == periodic.at(i));
}

TEST_CASE("flow lines from endpoints") {
    const auto forward = BoundaryPoint::periodic(w("a"));
    const auto backward = BoundaryPoint::periodic(w("b"));
    const auto line = FlowLineWindow::from_endpoints(backward, forward, 5);
    for (int i = 0; i < 5; ++i) CHECK(line.at(i) == Letter::generator(0));
    for (int i = -5; i < 0; ++i) CHECK(line.at(i) == Letter::generator(1, true));
    CHECK(BoundaryPoint(w("a"), w("a")) == BoundaryPoint::periodic(w("a")));
    CHECK(BoundaryPoint(w(""), w("a b")) == BoundaryPoint(w("a b"), w("a b")));
    CHECK_THROWS_AS(BoundaryPoint(w("a"), w("A")), PreconditionError);
}

TEST_CASE("tree distance") {
    CHECK(tree_distance(w("a b"), w("a b")) == 0);
    CHECK(tree_distance(w("a b"), w("a B")) == 2);
    CHECK(tree_distance(w(""), w("a b a")) == 3);
    CHECK(tree_distance(w("a b a"), w("a b b")) == 2);
}

TEST_CASE("property: tree distance matches free reduction") {
    testing::Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        const auto u = testing::random_letters(rng, 2, rng.integer(0, 10));
        const auto v = testing::random_letters(rng, 2, rng.integer(0, 10));
        CHECK(tree_distance(Word(2, u), Word(2, v)) == testing::naive_tree_distance(u, v));
    }
}

TEST_CASE("tree geodesics are unit speed") {
    testing::Rng rng(42);
    const auto fwd = testing::random_letters(rng, 2, 12);
    auto bwd = testing::random_letters(rng, 2, 12);
    while (bwd.front() == fwd.front()) bwd = testing::random_letters(rng, 2, 12);
    const TreeGeodesic g(w("a b"), fwd, bwd);
    CHECK(g.reach() == 12);
    for (int t = -12; t < 12; ++t) CHECK(tree_distance(g.vertex(t), g.vertex(t + 1)) == 1);
    CHECK(tree_distance(g.vertex(-12), g.vertex(12)) == 24);
    CHECK_THROWS_AS(TreeGeodesic(w(""), {Letter(0)}, {Letter(0)}), PreconditionError);
}

TEST_CASE("flow metric oracles") {
    const double ln2 = std::numbers::ln2;
    const auto ray = [](Letter x, std::size_t len) { return std::vector<Letter>(len, x); };
    const Letter a = Letter::generator(0), b = Letter::generator(1);
    const TreeGeodesic base(w(""), ray(a, 60), ray(a.inverse(), 60));

    SUBCASE("identical geodesics") {
        const auto v = flow_metric(base, base, 40);
        CHECK(v.value == 0.0);
        CHECK(v.tail_bound > 0.0);
        CHECK(v.tail_bound < 1e-9);
    }
    SUBCASE("shifted geodesic") {
        for (int s : {1, 2, 3}) {
            const TreeGeodesic moved(Word(2, std::vector<Letter>(static_cast<std::size_t>(s), a)), ray(a, 60),
                                     ray(a.inverse(), 60));
            const auto v = flow_metric(base, moved, 40);
            const double oracle = s * 2.0 / ln2;
            INFO("s " << s);
            CHECK(std::abs(v.value - oracle) <= 1e-9 + v.tail_bound);
        }
    }
    SUBCASE("rays diverging backward") {
        const TreeGeodesic other(w(""), ray(a, 60), ray(b, 60));
        const auto v = flow_metric(base, other, 40);
        const double oracle = 2.0 / (ln2 * ln2);
        CHECK(std::abs(v.value - oracle) <= 1e-9 + v.tail_bound);
    }
    SUBCASE("truncation beyond reach") {
        CHECK_THROWS_AS(flow_metric(base, base, 61), PreconditionError);
    }
}

TEST_CASE("property: flow metric is symmetric and satisfies the triangle inequality") {
    testing::Rng rng(43);
    const auto geodesic = [&] {
        const auto anchor = testing::random_letters(rng, 2, rng.integer(0, 3));
        auto fwd = testing::random_letters(rng, 2, 30);
        auto bwd = testing::random_letters(rng, 2, 30);
        while (bwd.front() == fwd.front()) bwd = testing::random_letters(rng, 2, 30);
        return TreeGeodesic(Word(2, anchor), fwd, bwd);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = geodesic(), h = geodesic(), k = geodesic();
        const auto gh = flow_metric(g, h, 25), hg = flow_metric(h, g, 25);
        const auto hk = flow_metric(h, k, 25), gk = flow_metric(g, k, 25);
        CHECK(gh.value == hg.value);
        CHECK(gk.value <= gh.value + hk.value + 1e-6 + gh.tail_bound + hk.tail_bound + gk.tail_bound);
    }
}
