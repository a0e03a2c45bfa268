#include "idpa/likelihood.hpp"

#include <cctype>
#include <stdexcept>

namespace idpa {

Likelihood Likelihood::from_hundredths(int hundredths) {
  if (hundredths < 0 || hundredths > 100) {
    throw std::logic_error("likelihood out of [0,1]");
  }
  return Likelihood(hundredths);
}

std::optional<Likelihood> Likelihood::parse(std::string_view text) {
  if (text.empty()) {
    return std::nullopt;
  }
  std::string_view whole = text;
  std::string_view frac;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    whole = text.substr(0, dot);
    frac = text.substr(dot + 1);
    if (frac.empty()) {
      return std::nullopt;
    }
  }
  if (whole.empty() || frac.size() > 2) {
    return std::nullopt;
  }
  auto all_digits = [](std::string_view s) {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        return false;
      }
    }
    return true;
  };
  if (!all_digits(whole) || !all_digits(frac)) {
    return std::nullopt;
  }
  // Reject absurdly long integer parts outright; the value range is [0,1].
  if (whole.size() > 3) {
    return std::nullopt;
  }
  int units = 0;
  for (char c : whole) {
    units = units * 10 + (c - '0');
  }
  int cents = 0;
  if (!frac.empty()) {
    cents = (frac[0] - '0') * 10;
    if (frac.size() == 2) {
      cents += frac[1] - '0';
    }
  }
  int hundredths = units * 100 + cents;
  if (hundredths > 100) {
    return std::nullopt;
  }
  return Likelihood(hundredths);
}

std::string Likelihood::to_string() const {
  if (hundredths_ % 100 == 0) {
    return std::to_string(hundredths_ / 100);
  }
  std::string out = "0.";
  out += static_cast<char>('0' + hundredths_ / 10);
  if (hundredths_ % 10 != 0) {
    out += static_cast<char>('0' + hundredths_ % 10);
  }
  return out;
}

}  // namespace idpa
