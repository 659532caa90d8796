#ifndef ABPHASE_VEC3_HPP
#define ABPHASE_VEC3_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace abphase {

// Semantic tag carried by a Vec3. Tags are advisory bookkeeping: addition
// and subtraction of two differently-tagged vectors throw, everything else
// (scaling, dot, cross) produces an untagged result that the caller labels.
enum class Quantity {
    unspecified,
    position,
    velocity,
    efield,
    bfield,
    potential,     // vector potential A
    momentum,
    momentum_density,
    magnetization,
    force,
};

const char* quantity_name(Quantity q);

// Plain 3-vector, Gaussian-unit quantities throughout.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    Quantity tag = Quantity::unspecified;

    Vec3() = default;
    Vec3(double x_, double y_, double z_, Quantity t = Quantity::unspecified)
        : x(x_), y(y_), z(z_), tag(t) {}

    Vec3 with_tag(Quantity t) const { return {x, y, z, t}; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    // distance from the z axis
    double rho() const { return std::hypot(x, y); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    Vec3& operator+=(const Vec3& o);
    Vec3& operator-=(const Vec3& o);
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Quantity combined_tag(Quantity a, Quantity b) {
    if (a == b) return a;
    if (a == Quantity::unspecified) return b;
    if (b == Quantity::unspecified) return a;
    throw std::logic_error(std::string("Vec3 tag mismatch: ") + quantity_name(a) +
                           " vs " + quantity_name(b));
}

inline Vec3& Vec3::operator+=(const Vec3& o) {
    tag = combined_tag(tag, o.tag);
    x += o.x; y += o.y; z += o.z;
    return *this;
}

inline Vec3& Vec3::operator-=(const Vec3& o) {
    tag = combined_tag(tag, o.tag);
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
}

inline Vec3 operator+(Vec3 a, const Vec3& b) { a += b; return a; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { a -= b; return a; }
inline Vec3 operator*(double s, Vec3 v) { v *= s; return v; }
inline Vec3 operator*(Vec3 v, double s) { v *= s; return v; }
inline Vec3 operator/(Vec3 v, double s) { v *= 1.0 / s; return v; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z, v.tag}; }

// dot/cross mix physical dimensions freely; results are untagged.
inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y,
            a.z * b.x - a.x * b.z,
            a.x * b.y - a.y * b.x};
}

} // namespace abphase

#endif
