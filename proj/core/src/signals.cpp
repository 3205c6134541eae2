#include "entrain/signals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "entrain/error.hpp"
#include "text_util.hpp"

namespace entrain {

namespace {

void validate(const Sinusoid& s) {
  if (!(s.omega > 0.0) || !std::isfinite(s.omega))
    throw ParameterError("sinusoid omega must be finite and > 0");
  if (!std::isfinite(s.amplitude) || !std::isfinite(s.phase))
    throw ParameterError("sinusoid amplitude and phase must be finite");
}

void validate(const Sampled& s) {
  if (s.times.size() != s.values.size())
    throw ParameterError("sampled input: times and values differ in length");
  if (s.times.size() < 2) throw ParameterError("sampled input needs at least two samples");
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (!std::isfinite(s.times[i]) || !std::isfinite(s.values[i]))
      throw ParameterError("sampled input contains non-finite entries");
    if (i > 0 && !(s.times[i] > s.times[i - 1]))
      throw ParameterError("sampled input times must be strictly increasing");
  }
}

}  // namespace

InputSignal::InputSignal(Constant c) : v_(c) {
  if (!std::isfinite(c.value)) throw ParameterError("constant input must be finite");
}

InputSignal::InputSignal(Sinusoid s) : v_(s) { validate(s); }

InputSignal::InputSignal(Sampled s) : v_(std::move(s)) { validate(std::get<Sampled>(v_)); }

double InputSignal::operator()(double t) const {
  if (const auto* c = std::get_if<Constant>(&v_)) return c->value;
  if (const auto* s = std::get_if<Sinusoid>(&v_)) return s->amplitude * std::sin(s->omega * t + s->phase);

  const auto& smp = std::get<Sampled>(v_);
  if (!(t >= smp.times.front() && t <= smp.times.back()))
    throw RangeError("sampled input queried at t=" + std::to_string(t) + " outside [" +
                     std::to_string(smp.times.front()) + ", " + std::to_string(smp.times.back()) + "]");
  auto hi = std::upper_bound(smp.times.begin(), smp.times.end(), t);
  if (hi == smp.times.end()) return smp.values.back();
  const auto i = static_cast<std::size_t>(hi - smp.times.begin());
  const double t0 = smp.times[i - 1];
  const double t1 = smp.times[i];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * smp.values[i - 1] + w * smp.values[i];
}

Sampled read_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open input file '" + path + "'");
  Sampled out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = detail::split(body, ',');
    const auto t = cols.size() == 2 ? detail::parse_double(cols[0]) : std::nullopt;
    const auto u = cols.size() == 2 ? detail::parse_double(cols[1]) : std::nullopt;
    if (!t || !u) {
      if (out.times.empty() && lineno == 1) continue;  // header
      throw ParameterError(path + ":" + std::to_string(lineno) + ": expected two numeric columns t,u");
    }
    out.times.push_back(*t);
    out.values.push_back(*u);
  }
  return out;
}

std::string to_spec(const InputSignal& sig) {
  using detail::format_shortest;
  const auto& v = sig.variant();
  if (const auto* c = std::get_if<Constant>(&v)) return "const:" + format_shortest(c->value);
  if (const auto* s = std::get_if<Sinusoid>(&v)) {
    auto out = "sin:" + format_shortest(s->amplitude) + ":" + format_shortest(s->omega);
    if (s->phase != 0.0) out += ":" + format_shortest(s->phase);
    return out;
  }
  return "sampled:" + std::to_string(std::get<Sampled>(v).times.size());
}

InputSignal parse_input_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParameterError("input spec '" + std::string(spec) + "' lacks a kind prefix");
  const auto kind = spec.substr(0, colon);
  const auto rest = spec.substr(colon + 1);

  if (kind == "file") {
    if (rest.empty()) throw ParameterError("file: input spec needs a path");
    return InputSignal(read_sampled_csv(std::string(rest)));
  }

  std::vector<double> nums;
  for (auto field : detail::split(rest, ':')) {
    const auto v = detail::parse_double(field);
    if (!v) throw ParameterError("input spec '" + std::string(spec) + "': bad number '" + std::string(field) + "'");
    nums.push_back(*v);
  }
  if (kind == "const") {
    if (nums.size() != 1) throw ParameterError("const: input spec takes exactly one value");
    return InputSignal::constant(nums[0]);
  }
  if (kind == "sin") {
    if (nums.size() != 2 && nums.size() != 3)
      throw ParameterError("sin: input spec takes <amplitude>:<omega>[:<phase>]");
    return InputSignal::sinusoid(nums[0], nums[1], nums.size() == 3 ? nums[2] : 0.0);
  }
  throw ParameterError("unknown input kind '" + std::string(kind) + "'");
}

}  // namespace entrain
