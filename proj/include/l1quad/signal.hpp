#pragma once

// Declarative disturbance signals: sums of constant, sinusoid and ramp terms,
// each optionally multiplied by the square of the north position p_1.

#include <cmath>
#include <vector>

#include "l1quad/geometry.hpp"

namespace l1quad {

enum class TermKind { Constant, Sine, Ramp };
enum class StateFactor { None, NorthSquared };

struct SignalTerm {
  TermKind kind = TermKind::Constant;
  double amplitude = 0.0;
  double omega = 1.0;  // Sine only [rad/s]
  double t0 = 0.0;     // time origin for Sine and Ramp [s]
  StateFactor factor = StateFactor::None;

  static SignalTerm constant(double a) { return {TermKind::Constant, a, 0.0, 0.0, StateFactor::None}; }
  static SignalTerm sine(double a, double omega, double t0) { return {TermKind::Sine, a, omega, t0, StateFactor::None}; }
  static SignalTerm ramp(double a, double t0) { return {TermKind::Ramp, a, 0.0, t0, StateFactor::None}; }

  SignalTerm times_north_squared() const {
    SignalTerm copy = *this;
    copy.factor = StateFactor::NorthSquared;
    return copy;
  }

  double evaluate(double t, const Vec3& position) const {
    double value = 0.0;
    switch (kind) {
      case TermKind::Constant: value = amplitude; break;
      case TermKind::Sine: value = amplitude * std::sin(omega * (t - t0)); break;
      case TermKind::Ramp: value = amplitude * (t - t0); break;
    }
    if (factor == StateFactor::NorthSquared) {
      value *= position.x() * position.x();
    }
    return value;
  }
};

struct Signal {
  std::vector<SignalTerm> terms;

  Signal() = default;
  Signal(std::initializer_list<SignalTerm> list) : terms(list) {}

  bool empty() const { return terms.empty(); }

  double evaluate(double t, const Vec3& position) const {
    double sum = 0.0;
    for (const auto& term : terms) sum += term.evaluate(t, position);
    return sum;
  }

  Signal scaled(double k) const {
    Signal out = *this;
    for (auto& term : out.terms) term.amplitude *= k;
    return out;
  }
};

}  // namespace l1quad
