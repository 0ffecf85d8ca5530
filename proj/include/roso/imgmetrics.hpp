#pragma once

// Image-similarity metrics: MSE, SSIM and a Frechet distance over
// hand-crafted features (fid_lite).

#include <vector>

#include <Eigen/Dense>

#include "roso/image.hpp"

namespace roso {

inline constexpr int kFeatureLength = 52; // 3 x 16 Lab histogram bins + 4 gradient statistics

using FeatureVector = std::vector<double>;

// Channels scaled to [0,1]; mean over pixels and channels.
double mse(const RgbImage& a, const RgbImage& b);

// Mean local SSIM over all window x window placements, on Rec.601 luma in
// [0,1] with population statistics.
double ssim(const RgbImage& a, const RgbImage& b, int window = 8, double k1 = 0.01, double k2 = 0.03);

FeatureVector extract_features(const RgbImage& image);

// Rows are samples. Requires at least two rows in each.
double frechet_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

double fid_lite(const std::vector<RgbImage>& a, const std::vector<RgbImage>& b);

// Mean squared forward difference (RGB in [0,1], channels summed) over
// neighbor pairs inside the rectangle. A no-reference sharpness score.
double gradient_energy(const RgbImage& image, const Rect& r);

} // namespace roso
