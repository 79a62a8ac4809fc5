#pragma once

// Stability profile f(t) = t/|log t| on (0, 1/e), 1/e beyond, f(0) = 0.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsph {

enum class Profile { LogLinear, Linear };

template <class T>
constexpr T profile_kink() {
  return T(1) / std::numbers::e_v<T>;
}

template <class T>
T profile_f(T t, Profile p = Profile::LogLinear) {
  if (t < T(0)) throw std::domain_error("stability profile: negative argument");
  if (p == Profile::Linear) return t;
  if (t == T(0)) return T(0);
  if (t >= profile_kink<T>()) return profile_kink<T>();
  return t / std::abs(std::log(t));
}

/// f'(t) = (1 - log t)/log^2 t on (0, 1/e), 0 beyond. At the kink the left
/// value 2 is returned; at 0 the limit 0.
template <class T>
T profile_f_prime(T t, Profile p = Profile::LogLinear) {
  if (t < T(0)) throw std::domain_error("stability profile: negative argument");
  if (p == Profile::Linear) return T(1);
  if (t == T(0)) return T(0);
  if (t > profile_kink<T>()) return T(0);
  const T lg = std::log(t);
  return (T(1) - lg) / (lg * lg);
}

/// f''(t) = (log t - 2)/(t log^3 t) on (0, 1/e), 0 elsewhere.
template <class T>
T profile_f_second(T t, Profile p = Profile::LogLinear) {
  if (t < T(0)) throw std::domain_error("stability profile: negative argument");
  if (p == Profile::Linear || t == T(0) || t >= profile_kink<T>()) return T(0);
  const T lg = std::log(t);
  return (lg - T(2)) / (t * lg * lg * lg);
}

}  // namespace nsph
