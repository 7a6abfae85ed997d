#pragma once

#include <cstddef>

namespace fuzzymark {

/// Rectangular region of a row-major plane.
struct Rect {
    int row = 0;
    int col = 0;
    int rows = 0;
    int cols = 0;

    int count() const noexcept { return rows * cols; }
    bool operator==(const Rect&) const = default;
};

/// Non-owning strided 2-D view into a plane of T.
template <class T>
class Window2D {
public:
    Window2D(T* origin, int rows, int cols, std::ptrdiff_t stride)
        : origin_(origin), rows_(rows), cols_(cols), stride_(stride) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int count() const noexcept { return rows_ * cols_; }

    T& operator()(int row, int col) const { return origin_[row * stride_ + col]; }

    operator Window2D<const T>() const { return {origin_, rows_, cols_, stride_}; }

private:
    T* origin_;
    int rows_;
    int cols_;
    std::ptrdiff_t stride_;
};

using CoeffWindow = Window2D<const double>;
using MutableCoeffWindow = Window2D<double>;

}  // namespace fuzzymark
