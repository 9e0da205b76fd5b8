#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ajel {

/// One observation: a view of `dim` contiguous coordinates.
using ObservationView = std::span<const double>;

/// An ordered, labeled collection of observations of equal dimension,
/// stored row-major. Every coordinate is finite.
class Sample {
public:
    Sample(std::string label, std::size_t dim, std::vector<double> flat);

    static Sample from_scalars(std::vector<double> xs, std::string label = "x");

    std::size_t size() const noexcept { return flat_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::string& label() const noexcept { return label_; }

    ObservationView operator[](std::size_t i) const noexcept {
        return {flat_.data() + i * dim_, dim_};
    }

    std::span<const double> flat() const noexcept { return flat_; }

    /// Coordinate k of every observation, in order.
    std::vector<double> column(std::size_t k) const;

private:
    std::string label_;
    std::size_t dim_;
    std::vector<double> flat_;
};

/// Vectorizable kernel shapes recognized by the leave-one-out fast paths.
enum class FastForm {
    none,
    pair_max_half,       // one-sample, h(x, y) = max(x, y) / 2
    cross_less,          // two-sample, h(x; y) = I(x < y)
    cross_less_midrank,  // two-sample, h(x; y) = I(x < y) + I(x == y) / 2
    cross_less_diff,     // two-sample, d = 2, h = I(x1 < y1) - I(x2 < y2)
};

/// A U-statistic kernel. One-sample kernels take `degree_x` observations;
/// two-sample kernels take `degree_x` observations of the first sample
/// followed by `degree_y` of the second. Kernels must be symmetric within
/// each sample's block of arguments and return finite values.
class Kernel {
public:
    using EvalFn = std::function<double(std::span<const ObservationView>)>;

    static constexpr int max_degree = 4;

    /// `dim` = 0 accepts any observation dimension.
    static Kernel one_sample(std::string name, int degree, std::size_t dim, EvalFn eval,
                             FastForm fast = FastForm::none);
    static Kernel two_sample(std::string name, int degree_x, int degree_y, std::size_t dim,
                             EvalFn eval, FastForm fast = FastForm::none);

    const std::string& name() const noexcept { return name_; }
    bool is_two_sample() const noexcept { return degree_y_ > 0; }
    int degree_x() const noexcept { return degree_x_; }
    int degree_y() const noexcept { return degree_y_; }
    int arity() const noexcept { return degree_x_ + degree_y_; }
    std::size_t dim() const noexcept { return dim_; }
    FastForm fast_form() const noexcept { return fast_; }

    double operator()(std::span<const ObservationView> args) const { return eval_(args); }

    /// Throws a size/usage error if a sample's dimension is incompatible.
    void check_dim(const Sample& s) const;

private:
    Kernel(std::string name, int dx, int dy, std::size_t dim, EvalFn eval, FastForm fast);

    std::string name_;
    int degree_x_;
    int degree_y_;
    std::size_t dim_;
    EvalFn eval_;
    FastForm fast_;
};

namespace kernels {

// Built-in registry:
//   mean         one-sample, m=1, d=1      h(x) = x
//   pwm          one-sample, m=2, d=1      h(x, y) = max(x, y) / 2
//   variance     one-sample, m=2, d=1      h(x, y) = (x - y)^2 / 2
//   auc          two-sample, (1,1), d=1    h(x; y) = I(y > x), ties count 0
//   auc-midrank  two-sample, (1,1), d=1    I(y > x) + I(y == x) / 2
//   auc-diff     two-sample, (1,1), d=2    I(x1 < y1) - I(x2 < y2)
//
// auc-diff estimates P(X1 < Y1) - P(X2 < Y2): column 1 and column 2 are two
// markers measured on the same subjects, X the first group, Y the second.
const Kernel& mean();
const Kernel& pwm();
const Kernel& variance();
const Kernel& auc();
const Kernel& auc_midrank();
const Kernel& auc_diff();

std::span<const Kernel* const> builtin();

/// Looks up a built-in kernel; throws a usage error for unknown names.
const Kernel& by_name(std::string_view name);

}  // namespace kernels

}  // namespace ajel
