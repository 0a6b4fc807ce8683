#include "kobalab/random.hpp"

#include <cmath>
#include <numbers>

namespace kobalab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 1))) {}

std::uint64_t CounterRng::next_u64() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  // Box-Muller; one value per call keeps the counter arithmetic simple.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx CounterRng::disc_point(double radius) noexcept {
  const double r = radius * std::sqrt(uniform());
  const double th = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, th);
}

ComplexPoint CounterRng::sphere_point(std::size_t dim) noexcept {
  std::vector<cplx> v(dim);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& c : v) {
      c = cplx(normal(), normal());
      s += std::norm(c);
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : v) c *= inv;
  return ComplexPoint(std::move(v));
}

ComplexPoint CounterRng::ball_point(std::size_t dim, double radius) noexcept {
  const double r = radius * std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(dim)));
  return r * sphere_point(dim);
}

std::uint64_t stream_id(std::string_view label, std::uint64_t index) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h ^ splitmix64(index));
}

}  // namespace kobalab
