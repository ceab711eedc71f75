#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace econet {

// Dense row-major matrix of doubles. World-scale flow tables are ~525x525,
// small enough that sparse storage never pays off.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    double row_sum(int r) const {
        const double* p = row(r);
        return std::accumulate(p, p + cols_, 0.0);
    }

    double sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

}  // namespace econet
