#include "spectra/field.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "spectra/error.hpp"

namespace spectra {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto* first = text.data();
  auto* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw InputError("invalid scalar '" + std::string(text) + "'");
  return v;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

FieldSpec FieldSpec::prime(std::uint32_t modulus) {
  if (!is_prime(modulus) || modulus > (1u << 31))
    throw InputError("field modulus " + std::to_string(modulus) + " is not a prime below 2^31");
  return {FieldKind::Prime, modulus};
}

Field::Field(FieldSpec spec) : spec_(spec) {
  if (spec_.kind == FieldKind::Prime) spec_ = FieldSpec::prime(spec.p);
  else spec_.p = 0;
}

Scalar Field::make_rational(__int128 num, __int128 den) const {
  if (den == 0) throw InputError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw ResourceError("rational coefficient overflow (64-bit)");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Scalar Field::from_int(std::int64_t v) const {
  if (is_prime()) {
    std::int64_t p = spec_.p;
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return {r, 1};
  }
  return {v, 1};
}

Scalar Field::add(Scalar a, Scalar b) const {
  if (is_prime()) {
    std::int64_t s = a.num + b.num;
    if (s >= static_cast<std::int64_t>(spec_.p)) s -= spec_.p;
    return {s, 1};
  }
  if (a.den == 1 && b.den == 1) return make_rational(static_cast<__int128>(a.num) + b.num, 1);
  return make_rational(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
}

Scalar Field::neg(Scalar a) const {
  if (is_prime()) return {a.num == 0 ? 0 : spec_.p - a.num, 1};
  return {-a.num, a.den};
}

Scalar Field::sub(Scalar a, Scalar b) const { return add(a, neg(b)); }

Scalar Field::mul(Scalar a, Scalar b) const {
  if (is_prime()) return {static_cast<std::int64_t>((static_cast<std::uint64_t>(a.num) * b.num) % spec_.p), 1};
  if (a.num == 0 || b.num == 0) return zero();
  return make_rational(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}

Scalar Field::inv(Scalar a) const {
  if (a.num == 0) throw InputError("division by zero");
  if (is_prime()) {
    // Fermat: a^(p-2)
    std::uint64_t base = a.num, result = 1, e = spec_.p - 2;
    while (e) {
      if (e & 1) result = result * base % spec_.p;
      base = base * base % spec_.p;
      e >>= 1;
    }
    return {static_cast<std::int64_t>(result), 1};
  }
  return make_rational(a.den, a.num);
}

std::string Field::format(Scalar a) const {
  if (is_prime()) return std::to_string(a.num);
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

Scalar Field::parse(std::string_view text) const {
  if (is_prime()) {
    if (text.find('/') != std::string_view::npos)
      throw InputError("fraction '" + std::string(text) + "' in prime-field datum");
    return from_int(parse_int(text));
  }
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return make_rational(parse_int(text), 1);
  return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

}  // namespace spectra
