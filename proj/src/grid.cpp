#include "ksf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace ksf {

bool ScalarField::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

void check_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

double integrate(const ScalarField& field) {
    // Kahan summation; the quadrature feeds long-run conservation checks.
    double sum = 0.0, c = 0.0;
    for (double v : field.values) {
        if (!std::isfinite(v)) throw std::domain_error("integrate: non-finite field entry");
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum * field.grid.cell_area();
}

double lp_norm(const ScalarField& field, double p) {
    if (p == kInfinityOrder || std::isinf(p)) {
        double m = 0.0;
        for (double v : field.values) {
            double a = std::abs(v);
            if (std::isnan(a)) return a;  // propagate so blow-up detection sees it
            m = std::max(m, a);
        }
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    double sum = 0.0;
    if (p == 1.0) {
        for (double v : field.values) sum += std::abs(v);
        return sum * field.grid.cell_area();
    }
    if (p == 2.0) {
        for (double v : field.values) sum += v * v;
    } else if (p == 3.0) {
        for (double v : field.values) sum += std::abs(v) * v * v;
    } else if (p == 4.0) {
        for (double v : field.values) sum += (v * v) * (v * v);
    } else {
        for (double v : field.values) sum += std::pow(std::abs(v), p);
    }
    return std::pow(sum * field.grid.cell_area(), 1.0 / p);
}

void gradient(const ScalarField& field, ScalarField& gx, ScalarField& gy) {
    const Grid2D& g = field.grid;
    gx = ScalarField(g);
    gy = ScalarField(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double dw = (i > 0) ? (field(i, j) - field(i - 1, j)) / g.dx : 0.0;
            double de = (i < g.nx - 1) ? (field(i + 1, j) - field(i, j)) / g.dx : 0.0;
            gx(i, j) = 0.5 * (dw + de);
            double ds = (j > 0) ? (field(i, j) - field(i, j - 1)) / g.dy : 0.0;
            double dn = (j < g.ny - 1) ? (field(i, j + 1) - field(i, j)) / g.dy : 0.0;
            gy(i, j) = 0.5 * (ds + dn);
        }
    }
}

double w1p_seminorm(const ScalarField& field, double p) {
    if (!(p >= 1.0) && !std::isinf(p) && p != kInfinityOrder)
        throw std::invalid_argument("w1p_seminorm: p must be >= 1 or infinity");
    ScalarField gx, gy;
    gradient(field, gx, gy);
    ScalarField mag(field.grid);
    for (std::size_t k = 0; k < mag.values.size(); ++k)
        mag.values[k] = std::hypot(gx.values[k], gy.values[k]);
    return lp_norm(mag, p);
}

double w1theta_norm(const ScalarField& field, double theta) {
    if (std::isinf(theta) || theta == kInfinityOrder)
        return std::max(lp_norm(field, theta), w1p_seminorm(field, theta));
    double a = lp_norm(field, theta);
    double b = w1p_seminorm(field, theta);
    return std::pow(std::pow(a, theta) + std::pow(b, theta), 1.0 / theta);
}

namespace {
constexpr char kMagic[4] = {'K', 'S', 'F', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}
}  // namespace

void write_snapshot(const ScalarField& field, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    os.write(kMagic, 4);
    put_u64(os, static_cast<std::uint64_t>(field.grid.nx));
    put_u64(os, static_cast<std::uint64_t>(field.grid.ny));
    put_f64(os, field.grid.lx);
    put_f64(os, field.grid.ly);
    for (double v : field.values) put_f64(os, v);
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

ScalarField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    auto nx = get_u64(is);
    auto ny = get_u64(is);
    double lx = get_f64(is);
    double ly = get_f64(is);
    if (nx > (1u << 20) || ny > (1u << 20))
        throw std::runtime_error("read_snapshot: implausible dimensions in " + path);
    ScalarField f(Grid2D(static_cast<int>(nx), static_cast<int>(ny), lx, ly));
    for (double& v : f.values) v = get_f64(is);
    if (!is) throw std::runtime_error("read_snapshot: truncated file " + path);
    return f;
}

}  // namespace ksf
