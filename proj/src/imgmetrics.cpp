#include "roso/imgmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "roso/error.hpp"
#include "roso/kernels.hpp"

namespace roso {

namespace {

void check_same(const RgbImage& a, const RgbImage& b, const char* what)
{
    if (a.width != b.width || a.height != b.height)
        throw MetricError(std::string(what) + ": image dimensions differ");
}

std::vector<double> luma_plane(const RgbImage& img)
{
    std::vector<double> y(img.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = luma({img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]});
    return y;
}

int bin(double x, double lo, double hi)
{
    const int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * 16.0));
    return std::clamp(b, 0, 15);
}

Eigen::MatrixXd to_matrix(const std::vector<FeatureVector>& rows)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), kFeatureLength);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < kFeatureLength; ++j)
            m(static_cast<Eigen::Index>(i), j) = rows[i][j];
    return m;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean)
{
    const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

double mse(const RgbImage& a, const RgbImage& b)
{
    check_same(a, b, "mse");
    if (a.pixels.empty())
        throw MetricError("mse: empty images");
    const auto ssd = kernels::sum_squared_diff_u8(a.pixels, b.pixels);
    return static_cast<double>(ssd) / (255.0 * 255.0) / static_cast<double>(a.pixels.size());
}

double ssim(const RgbImage& a, const RgbImage& b, int window, double k1, double k2)
{
    check_same(a, b, "ssim");
    if (window < 1 || a.width < window || a.height < window)
        throw MetricError("ssim: image smaller than window");
    const auto x = luma_plane(a), y = luma_plane(b);
    const double c1 = k1 * k1, c2 = k2 * k2; // dynamic range 1
    const double n = static_cast<double>(window) * window;
    const int w = a.width;
    double total = 0.0;
    long count = 0;
    for (int v0 = 0; v0 + window <= a.height; ++v0) {
        for (int u0 = 0; u0 + window <= w; ++u0) {
            double sx = 0, sy = 0;
            for (int v = v0; v < v0 + window; ++v)
                for (int u = u0; u < u0 + window; ++u) {
                    sx += x[static_cast<std::size_t>(v) * w + u];
                    sy += y[static_cast<std::size_t>(v) * w + u];
                }
            const double mx = sx / n, my = sy / n;
            double vx = 0, vy = 0, cxy = 0;
            for (int v = v0; v < v0 + window; ++v)
                for (int u = u0; u < u0 + window; ++u) {
                    const double dx = x[static_cast<std::size_t>(v) * w + u] - mx;
                    const double dy = y[static_cast<std::size_t>(v) * w + u] - my;
                    vx += dx * dx, vy += dy * dy, cxy += dx * dy;
                }
            vx /= n, vy /= n, cxy /= n;
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

FeatureVector extract_features(const RgbImage& image)
{
    if (image.size() == 0)
        throw MetricError("features: empty image");
    FeatureVector f(kFeatureLength, 0.0);
    const double n = static_cast<double>(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const Lab l = srgb_to_lab({image.pixels[3 * i], image.pixels[3 * i + 1], image.pixels[3 * i + 2]});
        f[bin(l.L, 0.0, 100.0)] += 1.0 / n;
        f[16 + bin(l.a, -128.0, 128.0)] += 1.0 / n;
        f[32 + bin(l.b, -128.0, 128.0)] += 1.0 / n;
    }
    const auto y = luma_plane(image);
    const int w = image.width, h = image.height;
    double sum_mag = 0, sum_mag2 = 0, sum_dx = 0, sum_dy = 0;
    long m = 0;
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * w + u;
            const double dx = u + 1 < w ? y[i + 1] - y[i] : 0.0;
            const double dy = v + 1 < h ? y[i + w] - y[i] : 0.0;
            const double mag = std::sqrt(dx * dx + dy * dy);
            sum_mag += mag, sum_mag2 += mag * mag;
            sum_dx += std::abs(dx), sum_dy += std::abs(dy);
            ++m;
        }
    }
    const double mean_mag = sum_mag / m;
    f[48] = mean_mag;
    f[49] = std::sqrt(std::max(0.0, sum_mag2 / m - mean_mag * mean_mag));
    f[50] = sum_dx / m;
    f[51] = sum_dy / m;
    return f;
}

double frechet_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
{
    if (x.rows() < 2 || y.rows() < 2)
        throw MetricError("frechet distance: each corpus needs at least two samples");
    if (x.cols() != y.cols())
        throw MetricError("frechet distance: feature lengths differ");
    if (!x.allFinite() || !y.allFinite())
        throw MetricError("frechet distance: non-finite features");
    const Eigen::VectorXd mx = x.colwise().mean().transpose();
    const Eigen::VectorXd my = y.colwise().mean().transpose();
    const Eigen::MatrixXd sx = covariance(x, mx);
    const Eigen::MatrixXd sy = covariance(y, my);
    // Tr((Sx Sy)^1/2) = Tr((Sx^1/2 Sy Sx^1/2)^1/2), and the latter is symmetric.
    const Eigen::MatrixXd rx = psd_sqrt(sx);
    Eigen::MatrixXd inner = rx * sy * rx;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner, Eigen::EigenvaluesOnly);
    const double tr_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    const double d = (mx - my).squaredNorm() + sx.trace() + sy.trace() - 2.0 * tr_sqrt;
    return std::max(0.0, d);
}

double fid_lite(const std::vector<RgbImage>& a, const std::vector<RgbImage>& b)
{
    if (a.size() < 2 || b.size() < 2)
        throw MetricError("fid_lite: each corpus needs at least two images");
    std::vector<FeatureVector> fa, fb;
    for (const auto& img : a)
        fa.push_back(extract_features(img));
    for (const auto& img : b)
        fb.push_back(extract_features(img));
    return frechet_distance(to_matrix(fa), to_matrix(fb));
}

double gradient_energy(const RgbImage& image, const Rect& r)
{
    const int u0 = std::max(0, r.x0), v0 = std::max(0, r.y0);
    const int u1 = std::min(image.width, r.x0 + r.width), v1 = std::min(image.height, r.y0 + r.height);
    double sum = 0.0;
    long pairs = 0;
    auto diff = [&](int ua, int va, int ub, int vb) {
        const Rgb p = image.at(ua, va), q = image.at(ub, vb);
        const double dr = (p.r - q.r) / 255.0, dg = (p.g - q.g) / 255.0, db = (p.b - q.b) / 255.0;
        sum += dr * dr + dg * dg + db * db;
        ++pairs;
    };
    for (int v = v0; v < v1; ++v)
        for (int u = u0; u < u1; ++u) {
            if (u + 1 < u1)
                diff(u, v, u + 1, v);
            if (v + 1 < v1)
                diff(u, v, u, v + 1);
        }
    return pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
}

} // namespace roso
