#include "ajel/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ajel::simd;

namespace {

std::vector<Backend> vector_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::avx2, Backend::neon}) {
        if (backend_supported(b)) out.push_back(b);
    }
    return out;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, bool with_ties) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_int_distribution<int> small(-3, 3);
    std::vector<double> v(n);
    for (double& x : v) x = with_ties ? small(rng) : u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar backend is always available and selectable") {
    CHECK(backend_supported(Backend::scalar));
    const Backend before = active_backend();
    CHECK(set_backend(Backend::scalar) == Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    set_backend(before);
    CHECK(backend_name(Backend::avx2) == "avx2");
}

TEST_CASE("vector kernels match the scalar reference") {
    const KernelTable& ref = table(Backend::scalar);
    std::mt19937_64 rng(7);
    const auto backends = vector_backends();
    if (backends.empty()) MESSAGE("no vector backend on this host; equivalence is vacuous");

    for (Backend b : backends) {
        const KernelTable& vec = table(b);
        CAPTURE(backend_name(b));
        for (std::size_t n = 0; n <= 37; ++n) {
            for (bool ties : {false, true}) {
                CAPTURE(n);
                CAPTURE(ties);
                const std::vector<double> x = random_values(rng, n, ties);

                std::vector<double> r1(n), r2(n);
                ref.pair_max_row_sums(x, r1);
                vec.pair_max_row_sums(x, r2);
                for (std::size_t i = 0; i < n; ++i) {
                    CHECK(r2[i] == doctest::Approx(r1[i]).epsilon(1e-13).scale(10.0 * n));
                }

                for (double pivot : {-1.0, 0.0, 2.5, x.empty() ? 0.0 : x[n / 2]}) {
                    const CompareCounts c1 = ref.compare_counts(pivot, x);
                    const CompareCounts c2 = vec.compare_counts(pivot, x);
                    CHECK(c1.below == c2.below);
                    CHECK(c1.equal == c2.equal);
                }

                std::vector<double> g = x;
                double gmax = 0.0;
                for (double v : g) gmax = std::max(gmax, std::fabs(v));
                const double lambda = gmax > 0.0 ? 0.3 / gmax : 0.0;
                const DualSums d1 = ref.dual_sums(g, lambda);
                const DualSums d2 = vec.dual_sums(g, lambda);
                const double scale = 1.0 + static_cast<double>(n) * 10.0;
                CHECK(std::fabs(d1.f - d2.f) <= 1e-13 * scale);
                CHECK(std::fabs(d1.fprime - d2.fprime) <= 1e-13 * scale * 10.0);
                if (n > 0) CHECK(d1.min_denom == d2.min_denom);
            }
        }
    }
}

TEST_CASE("scalar kernels agree with direct definitions") {
    const KernelTable& ref = table(Backend::scalar);
    const std::vector<double> x{1.0, 2.0, 3.0};
    std::vector<double> rows(3);
    ref.pair_max_row_sums(x, rows);
    CHECK(rows[0] == 5.0);  // max(1,2) + max(1,3)
    CHECK(rows[1] == 5.0);  // max(2,1) + max(2,3)
    CHECK(rows[2] == 6.0);

    const CompareCounts c = ref.compare_counts(2.0, std::vector<double>{1.0, 2.0, 2.0, 3.0});
    CHECK(c.below == 1);
    CHECK(c.equal == 2);

    const DualSums d = ref.dual_sums(std::vector<double>{-1.0, 2.0}, 0.25);
    CHECK(d.f == doctest::Approx(0.0));
    CHECK(d.min_denom == doctest::Approx(0.75));
}
