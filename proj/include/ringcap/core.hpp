#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ringcap {

// ---------------------------------------------------------------------------
// Small fixed-dimension vectors. Dimension is a template parameter; the
// library supports N = 2 and N = 3 only.
// ---------------------------------------------------------------------------

template <int N>
struct Vec {
  static_assert(N == 2 || N == 3, "only dimensions 2 and 3 are supported");
  std::array<double, N> v{};

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[static_cast<size_t>(i)] + o[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[static_cast<size_t>(i)] - o[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = v[static_cast<size_t>(i)] * s;
    return r;
  }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < N; ++i) v[static_cast<size_t>(i)] += o[i];
    return *this;
  }
};

template <int N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <int N>
inline double norm(const Vec<N>& a) {
  return std::sqrt(dot(a, a));
}

template <int N>
inline double dist(const Vec<N>& a, const Vec<N>& b) {
  return norm(a - b);
}

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

// Axis-aligned box, used for bounding boxes and grid extents.
template <int N>
struct BoxN {
  Vec<N> lo{}, hi{};

  double extent(int i) const { return hi[i] - lo[i]; }
  double max_extent() const {
    double m = 0;
    for (int i = 0; i < N; ++i) m = std::max(m, extent(i));
    return m;
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < N; ++i) v *= extent(i);
    return v;
  }
  bool contains(const Vec<N>& x) const {
    for (int i = 0; i < N; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  bool contains_box(const BoxN& b) const {
    return contains(b.lo) && contains(b.hi);
  }
  bool overlaps(const BoxN& b) const {
    for (int i = 0; i < N; ++i)
      if (b.hi[i] <= lo[i] || b.lo[i] >= hi[i]) return false;
    return true;
  }
  Vec<N> center() const {
    Vec<N> c;
    for (int i = 0; i < N; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }
  BoxN padded(double rel) const {
    BoxN b = *this;
    for (int i = 0; i < N; ++i) {
      double pad = rel * extent(i);
      b.lo[i] -= pad;
      b.hi[i] += pad;
    }
    return b;
  }
  double diagonal() const {
    double s = 0;
    for (int i = 0; i < N; ++i) s += extent(i) * extent(i);
    return std::sqrt(s);
  }
};

using Box2 = BoxN<2>;
using Box3 = BoxN<3>;

template <int N>
inline BoxN<N> make_cube(const Vec<N>& center, double half) {
  BoxN<N> b;
  for (int i = 0; i < N; ++i) {
    b.lo[i] = center[i] - half;
    b.hi[i] = center[i] + half;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 keeps sampled values identical across
// platforms and standard-library versions; std::mt19937 distributions do not.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

  template <int N>
  Vec<N> point_in(const BoxN<N>& box) {
    Vec<N> p;
    for (int i = 0; i < N; ++i) p[i] = uniform(box.lo[i], box.hi[i]);
    return p;
  }

 private:
  uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel map over an index range. Tasks must be independent; results are
// indexed, so the outcome does not depend on scheduling. RINGCAP_THREADS
// caps the worker count.
// ---------------------------------------------------------------------------

inline int worker_count(std::size_t tasks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RINGCAP_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(tasks, 1)));
}

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  int workers = worker_count(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string format_double(double x, int sig = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, x);
  return buf;
}

}  // namespace ringcap
