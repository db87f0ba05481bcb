#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spectra {

enum class FieldKind { Prime, Rational };

struct FieldSpec {
  FieldKind kind = FieldKind::Prime;
  std::uint32_t p = 32003;  // ignored for Rational

  static FieldSpec prime(std::uint32_t modulus);
  static FieldSpec rational() { return {FieldKind::Rational, 0}; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// A field element. Prime field: den == 1 and 0 <= num < p.
// Rationals: gcd(num, den) == 1 and den > 0. Rational arithmetic is 64-bit
// with overflow detection (ResourceError).
struct Scalar {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool is_zero() const { return num == 0; }
  friend bool operator==(const Scalar&, const Scalar&) = default;
};

// Arithmetic over a FieldSpec. Cheap to copy.
class Field {
 public:
  Field() = default;
  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  bool is_prime() const { return spec_.kind == FieldKind::Prime; }
  std::uint32_t characteristic() const { return is_prime() ? spec_.p : 0; }

  Scalar zero() const { return {0, 1}; }
  Scalar one() const { return {1, 1}; }
  Scalar from_int(std::int64_t v) const;

  Scalar add(Scalar a, Scalar b) const;
  Scalar sub(Scalar a, Scalar b) const;
  Scalar mul(Scalar a, Scalar b) const;
  Scalar neg(Scalar a) const;
  Scalar inv(Scalar a) const;  // throws InputError on zero
  Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }

  // "0".."p-1" for prime fields, "a/b" (reduced, b > 0) for rationals.
  std::string format(Scalar a) const;
  // Accepts any integer for prime fields (reduced mod p); "a", "a/b" for
  // rationals. Throws InputError.
  Scalar parse(std::string_view text) const;

  friend bool operator==(const Field& a, const Field& b) { return a.spec_ == b.spec_; }

 private:
  Scalar make_rational(__int128 num, __int128 den) const;
  FieldSpec spec_{};
};

}  // namespace spectra
