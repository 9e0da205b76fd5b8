#include "ajel/ustat.hpp"

#include "ajel/error.hpp"
#include "ajel/simd/kernels.hpp"
#include "ajel/summation.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace ajel {
namespace {

using Index = std::size_t;
using Args = std::array<ObservationView, Kernel::max_degree>;

// Lexicographic m-combinations of positions 0..k-1.
class Combinations {
public:
    Combinations(std::size_t k, int m) : k_(k), m_(m) {
        for (int j = 0; j < m_; ++j) pos_[j] = static_cast<std::size_t>(j);
        done_ = static_cast<std::size_t>(m_) > k_;
    }

    bool done() const noexcept { return done_; }
    std::size_t operator[](int j) const noexcept { return pos_[j]; }

    void next() noexcept {
        int j = m_ - 1;
        while (j >= 0 && pos_[j] == k_ - static_cast<std::size_t>(m_ - j)) --j;
        if (j < 0) {
            done_ = true;
            return;
        }
        ++pos_[j];
        for (int t = j + 1; t < m_; ++t) pos_[t] = pos_[t - 1] + 1;
    }

    void reset() noexcept {
        for (int j = 0; j < m_; ++j) pos_[j] = static_cast<std::size_t>(j);
        done_ = static_cast<std::size_t>(m_) > k_;
    }

private:
    std::size_t k_;
    int m_;
    std::array<std::size_t, Kernel::max_degree> pos_{};
    bool done_;
};

[[noreturn]] void non_finite(const Kernel& kernel, const std::vector<Index>& subset) {
    std::ostringstream os;
    os << "kernel '" << kernel.name() << "' returned a non-finite value on subset {";
    for (std::size_t t = 0; t < subset.size(); ++t) os << (t ? ", " : "") << subset[t];
    os << "}";
    fail(ErrorKind::numeric, os.str());
}

double checked(const Kernel& kernel, std::span<const ObservationView> args, auto&& subset_indices) {
    const double h = kernel(args);
    if (!std::isfinite(h)) non_finite(kernel, subset_indices());
    return h;
}

// U-statistic over the observations sample[idx[0]], sample[idx[1]], ...
double one_sample_over(const Sample& s, std::span<const Index> idx, const Kernel& kernel) {
    const int m = kernel.degree_x();
    Args args{};
    CompensatedSum acc;
    std::size_t count = 0;
    for (Combinations c(idx.size(), m); !c.done(); c.next()) {
        for (int j = 0; j < m; ++j) args[j] = s[idx[c[j]]];
        acc.add(checked(kernel, std::span(args.data(), m), [&] {
            std::vector<Index> sub;
            for (int j = 0; j < m; ++j) sub.push_back(idx[c[j]]);
            return sub;
        }));
        ++count;
    }
    return acc.value() / static_cast<double>(count);
}

double two_sample_over(const Sample& x, std::span<const Index> ix, const Sample& y, std::span<const Index> iy,
                       const Kernel& kernel) {
    const int m1 = kernel.degree_x();
    const int m2 = kernel.degree_y();
    Args args{};
    CompensatedSum acc;
    std::size_t count = 0;
    Combinations cy(iy.size(), m2);
    for (Combinations cx(ix.size(), m1); !cx.done(); cx.next()) {
        for (int j = 0; j < m1; ++j) args[j] = x[ix[cx[j]]];
        for (cy.reset(); !cy.done(); cy.next()) {
            for (int j = 0; j < m2; ++j) args[m1 + j] = y[iy[cy[j]]];
            acc.add(checked(kernel, std::span(args.data(), m1 + m2), [&] {
                // pooled indices: second sample offset by n1
                std::vector<Index> sub;
                for (int j = 0; j < m1; ++j) sub.push_back(ix[cx[j]]);
                for (int j = 0; j < m2; ++j) sub.push_back(x.size() + iy[cy[j]]);
                return sub;
            }));
            ++count;
        }
    }
    return acc.value() / static_cast<double>(count);
}

std::vector<Index> iota_without(std::size_t n, std::size_t skip) {
    std::vector<Index> idx;
    idx.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != skip) idx.push_back(i);
    }
    return idx;
}

void require_size(std::size_t n, int m, const std::string& what) {
    if (n < static_cast<std::size_t>(m)) {
        fail(ErrorKind::size, what + ": sample size " + std::to_string(n) + " is below kernel degree " +
                                  std::to_string(m));
    }
}

double pseudo(std::size_t n, double u, double u_del) {
    const double nn = static_cast<double>(n);
    return nn * u - (nn - 1.0) * u_del;
}

// ---------------------------------------------------------------------------
// one-sample leave-one-out

PseudoValueSet one_sample_full(const Sample& s, const Kernel& kernel) {
    const std::size_t n = s.size();
    const std::vector<Index> all = iota_without(n, n);
    PseudoValueSet pv;
    pv.design = OneSampleDesign{n, kernel.degree_x()};
    pv.u_stat = one_sample_over(s, all, kernel);
    pv.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pv.values[i] = pseudo(n, pv.u_stat, one_sample_over(s, iota_without(n, i), kernel));
    }
    return pv;
}

// Degree 1: n * mean - (n - 1) * mean_without_i == h(x_i).
PseudoValueSet one_sample_identity(const Sample& s, const Kernel& kernel) {
    const std::size_t n = s.size();
    PseudoValueSet pv;
    pv.design = OneSampleDesign{n, 1};
    pv.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ObservationView o = s[i];
        pv.values[i] = checked(kernel, std::span(&o, 1), [&] { return std::vector<Index>{i}; });
    }
    pv.u_stat = compensated_mean(pv.values);
    return pv;
}

// Degree 2: row sums r_i of the kernel matrix give
// U_{n-1}^{(-i)} = (S - r_i) / C(n-1, 2) with S the total over i < j.
PseudoValueSet one_sample_pairs(const Sample& s, const Kernel& kernel) {
    const std::size_t n = s.size();
    std::vector<double> rows(n);
    double total = 0.0;

    if (kernel.fast_form() == FastForm::pair_max_half && s.dim() == 1) {
        simd::active().pair_max_row_sums(s.flat(), rows);
        for (double& r : rows) r *= 0.5;
        total = 0.5 * compensated_sum(rows);
    } else {
        std::vector<CompensatedSum> row_acc(n);
        CompensatedSum tot;
        Args args{};
        for (std::size_t i = 0; i < n; ++i) {
            args[0] = s[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                args[1] = s[j];
                const double h = checked(kernel, std::span(args.data(), 2), [&] {
                    return std::vector<Index>{i, j};
                });
                row_acc[i].add(h);
                row_acc[j].add(h);
                tot.add(h);
            }
        }
        for (std::size_t i = 0; i < n; ++i) rows[i] = row_acc[i].value();
        total = tot.value();
    }

    const double nn = static_cast<double>(n);
    const double pairs = nn * (nn - 1.0) / 2.0;
    const double pairs_del = (nn - 1.0) * (nn - 2.0) / 2.0;
    PseudoValueSet pv;
    pv.design = OneSampleDesign{n, 2};
    pv.u_stat = total / pairs;
    pv.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pv.values[i] = pseudo(n, pv.u_stat, (total - rows[i]) / pairs_del);
    }
    return pv;
}

// ---------------------------------------------------------------------------
// two-sample leave-one-out

PseudoValueSet two_sample_full(const Sample& x, const Sample& y, const Kernel& kernel) {
    const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
    const std::vector<Index> ax = iota_without(n1, n1);
    const std::vector<Index> ay = iota_without(n2, n2);
    PseudoValueSet pv;
    pv.design = TwoSampleDesign{n1, n2, kernel.degree_x(), kernel.degree_y()};
    pv.u_stat = two_sample_over(x, ax, y, ay, kernel);
    pv.values.resize(n);
    for (std::size_t i = 0; i < n1; ++i) {
        pv.values[i] = pseudo(n, pv.u_stat, two_sample_over(x, iota_without(n1, i), y, ay, kernel));
    }
    for (std::size_t j = 0; j < n2; ++j) {
        pv.values[n1 + j] = pseudo(n, pv.u_stat, two_sample_over(x, ax, y, iota_without(n2, j), kernel));
    }
    return pv;
}

// Strict / midrank comparison counts of one coordinate, via the SIMD table.
// rows[i] = sum_j h(x_i; y_j), cols[j] = sum_i h(x_i; y_j), h = I(x < y) [+ I(x == y)/2].
void cross_less_sums(std::span<const double> xs, std::span<const double> ys, bool midrank,
                     std::vector<double>& rows, std::vector<double>& cols) {
    const simd::KernelTable& t = simd::active();
    const auto n2 = static_cast<std::int64_t>(ys.size());
    rows.assign(xs.size(), 0.0);
    cols.assign(ys.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const simd::CompareCounts c = t.compare_counts(xs[i], ys);  // y < x_i, y == x_i
        rows[i] = static_cast<double>(n2 - c.below - c.equal) + (midrank ? 0.5 * static_cast<double>(c.equal) : 0.0);
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const simd::CompareCounts c = t.compare_counts(ys[j], xs);  // x < y_j, x == y_j
        cols[j] = static_cast<double>(c.below) + (midrank ? 0.5 * static_cast<double>(c.equal) : 0.0);
    }
}

// Degrees (1,1): U^{(-x_i)} = (S - r_i) / ((n1-1) n2), U^{(-y_j)} = (S - c_j) / (n1 (n2-1)).
PseudoValueSet two_sample_cross(const Sample& x, const Sample& y, const Kernel& kernel) {
    const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
    std::vector<double> rows, cols;
    double total = 0.0;

    const FastForm ff = kernel.fast_form();
    if ((ff == FastForm::cross_less || ff == FastForm::cross_less_midrank) && x.dim() == 1) {
        cross_less_sums(x.flat(), y.flat(), ff == FastForm::cross_less_midrank, rows, cols);
        total = compensated_sum(rows);
    } else if (ff == FastForm::cross_less_diff && x.dim() == 2) {
        std::vector<double> r2, c2;
        cross_less_sums(x.column(0), y.column(0), false, rows, cols);
        cross_less_sums(x.column(1), y.column(1), false, r2, c2);
        for (std::size_t i = 0; i < n1; ++i) rows[i] -= r2[i];
        for (std::size_t j = 0; j < n2; ++j) cols[j] -= c2[j];
        total = compensated_sum(rows);
    } else {
        std::vector<CompensatedSum> row_acc(n1), col_acc(n2);
        CompensatedSum tot;
        Args args{};
        for (std::size_t i = 0; i < n1; ++i) {
            args[0] = x[i];
            for (std::size_t j = 0; j < n2; ++j) {
                args[1] = y[j];
                const double h = checked(kernel, std::span(args.data(), 2), [&] {
                    return std::vector<Index>{i, n1 + j};
                });
                row_acc[i].add(h);
                col_acc[j].add(h);
                tot.add(h);
            }
        }
        rows.resize(n1);
        cols.resize(n2);
        for (std::size_t i = 0; i < n1; ++i) rows[i] = row_acc[i].value();
        for (std::size_t j = 0; j < n2; ++j) cols[j] = col_acc[j].value();
        total = tot.value();
    }

    const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
    PseudoValueSet pv;
    pv.design = TwoSampleDesign{n1, n2, 1, 1};
    pv.u_stat = total / (d1 * d2);
    pv.values.resize(n);
    for (std::size_t i = 0; i < n1; ++i) {
        pv.values[i] = pseudo(n, pv.u_stat, (total - rows[i]) / ((d1 - 1.0) * d2));
    }
    for (std::size_t j = 0; j < n2; ++j) {
        pv.values[n1 + j] = pseudo(n, pv.u_stat, (total - cols[j]) / (d1 * (d2 - 1.0)));
    }
    return pv;
}

void check_one_sample_kernel(const Kernel& kernel) {
    if (kernel.is_two_sample()) {
        fail(ErrorKind::usage, "kernel '" + kernel.name() + "' is a two-sample kernel");
    }
}

void check_two_sample_kernel(const Kernel& kernel, const Sample& x, const Sample& y) {
    if (!kernel.is_two_sample()) {
        fail(ErrorKind::usage, "kernel '" + kernel.name() + "' is a one-sample kernel");
    }
    kernel.check_dim(x);
    kernel.check_dim(y);
    if (x.dim() != y.dim()) fail(ErrorKind::usage, "samples have different dimensions");
}

}  // namespace

PseudoValueSet PseudoValueSet::from_values(std::vector<double> values) {
    if (values.empty()) fail(ErrorKind::size, "pseudo-value set is empty");
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorKind::numeric, "non-finite pseudo-value");
    }
    PseudoValueSet pv;
    pv.u_stat = compensated_mean(values);
    pv.design = OneSampleDesign{values.size(), 1};
    pv.values = std::move(values);
    return pv;
}

std::size_t design_size(const Design& d) noexcept {
    if (const auto* one = std::get_if<OneSampleDesign>(&d)) return one->n;
    const auto& two = std::get<TwoSampleDesign>(d);
    return two.n1 + two.n2;
}

double eval_u_statistic(const Sample& sample, const Kernel& kernel) {
    check_one_sample_kernel(kernel);
    kernel.check_dim(sample);
    require_size(sample.size(), kernel.degree_x(), "U-statistic");
    const std::vector<Index> all = iota_without(sample.size(), sample.size());
    return one_sample_over(sample, all, kernel);
}

double eval_u_statistic_two(const Sample& x, const Sample& y, const Kernel& kernel) {
    check_two_sample_kernel(kernel, x, y);
    require_size(x.size(), kernel.degree_x(), "two-sample U-statistic (first sample)");
    require_size(y.size(), kernel.degree_y(), "two-sample U-statistic (second sample)");
    return two_sample_over(x, iota_without(x.size(), x.size()), y, iota_without(y.size(), y.size()), kernel);
}

PseudoValueSet jackknife_pseudo_values(const Sample& sample, const Kernel& kernel, PseudoValueOptions opts) {
    check_one_sample_kernel(kernel);
    kernel.check_dim(sample);
    const int m = kernel.degree_x();
    if (sample.size() < static_cast<std::size_t>(m) + 1) {
        fail(ErrorKind::size, "jackknife: deleting one of " + std::to_string(sample.size()) +
                                  " observations leaves fewer than the kernel degree " + std::to_string(m));
    }
    if (opts.strategy == LeaveOneOut::automatic) {
        if (m == 1) return one_sample_identity(sample, kernel);
        if (m == 2) return one_sample_pairs(sample, kernel);
    }
    return one_sample_full(sample, kernel);
}

PseudoValueSet jackknife_pseudo_values(const Sample& x, const Sample& y, const Kernel& kernel,
                                       PseudoValueOptions opts) {
    check_two_sample_kernel(kernel, x, y);
    const int m1 = kernel.degree_x(), m2 = kernel.degree_y();
    if (x.size() < static_cast<std::size_t>(m1) + 1 || y.size() < static_cast<std::size_t>(m2) + 1) {
        fail(ErrorKind::size, "jackknife: two-sample design (" + std::to_string(x.size()) + ", " +
                                  std::to_string(y.size()) + ") cannot drop one observation from each sample "
                                  "and keep at least (" + std::to_string(m1) + ", " + std::to_string(m2) +
                                  ") observations");
    }
    if (opts.strategy == LeaveOneOut::automatic && m1 == 1 && m2 == 1) return two_sample_cross(x, y, kernel);
    return two_sample_full(x, y, kernel);
}

}  // namespace ajel
