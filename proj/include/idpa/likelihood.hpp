#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace idpa {

// Likelihood of a privacy impact, an exact rational in [0,1] held in
// hundredths. Keeping the value exact (rather than floating point) is what
// makes report output byte-stable; the model format therefore allows at most
// two fraction digits.
class Likelihood {
 public:
  Likelihood() = default;

  static Likelihood certain() { return Likelihood(100); }
  static Likelihood from_hundredths(int hundredths);

  // Accepts "0", "1", "0.5", "0.85", "1.00"; rejects values outside [0,1]
  // and more than two fraction digits.
  static std::optional<Likelihood> parse(std::string_view text);

  int hundredths() const { return hundredths_; }

  // Shortest decimal form: "0", "0.5", "0.85", "1".
  std::string to_string() const;

  auto operator<=>(const Likelihood&) const = default;

 private:
  explicit Likelihood(int hundredths) : hundredths_(hundredths) {}

  int hundredths_ = 0;
};

}  // namespace idpa
