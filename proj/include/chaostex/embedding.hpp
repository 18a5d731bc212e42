#pragma once

#include "chaostex/image.hpp"
#include "chaostex/point_cloud.hpp"

namespace ctx {

/// Maps pixel (i, j) (1-based) of an m x n image to the point
/// (i/m, j/n, I(i,j)) at linear index (i-1)*n + j.
PointCloud embed(const GrayImage& image);

/// Rebuilds an m x n image from a (possibly iterated) cloud.
///
/// Row and column coordinates are replaced by their rank among the sorted
/// unique values of that column (values equal after rounding to 12 decimals
/// are one value); rank r of u unique values lands on cell ceil(r*m/u) (resp.
/// ceil(r*n/u)). Several points on one cell are averaged. Empty cells copy the
/// previous cell in row-major order; an empty first cell takes the mean
/// intensity of the cloud.
///
/// The result does not depend on the order of the cloud's rows, and
/// reconstruct(embed(img)) == img exactly.
GrayImage reconstruct(const PointCloud& cloud);

/// Pixelwise (1-w)*a + w*b. Throws ContractViolation on a size mismatch or w
/// outside [0,1].
GrayImage blend(const GrayImage& a, const GrayImage& b, double w);

}  // namespace ctx
