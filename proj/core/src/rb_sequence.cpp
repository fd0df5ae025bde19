// Copyright 2026 The rbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rbsim/rb_sequence.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rbsim/errors.hpp"

namespace rbsim {
namespace {

std::array<std::vector<RecoveryDecomposition>, 24> build_decomposition_table() {
  std::array<std::vector<RecoveryDecomposition>, 24> table;
  auto consider = [&table](RecoveryDecomposition d) {
    auto& slot = table[d.clifford().index()];
    if (!slot.empty() && slot.front().g.size() < d.g.size()) return;
    if (!slot.empty() && slot.front().g.size() > d.g.size()) slot.clear();
    slot.push_back(std::move(d));
  };
  for (const PGate& p : PGate::all()) {
    consider({p, {}});
    for (const GGate& g0 : GGate::all()) {
      consider({p, {g0}});
      for (const GGate& g1 : GGate::all()) consider({p, {g0, g1}});
    }
  }
  return table;
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

CliffordElement RecoveryDecomposition::clifford() const {
  CliffordElement c;
  for (const GGate& step : g) c = compose(step.clifford(), c);
  return compose(p.clifford(), c);
}

const std::vector<RecoveryDecomposition>& recovery_decompositions(
    const CliffordElement& c) {
  static const auto table = build_decomposition_table();
  return table[c.index()];
}

CliffordElement RBSequence::accumulated() const {
  CliffordElement acc;
  for (const PGStep& step : gates) acc = compose(step.clifford(), acc);
  return acc;
}

CliffordElement RBSequence::net() const {
  CliffordElement c = compose(recovery.pre.clifford(), accumulated());
  c = compose(recovery.r_steps.clifford(), c);
  return compose(recovery.post.clifford(), c);
}

RBSequence sample_rb_sequence(std::size_t m, Rng& rng) {
  std::uniform_int_distribution<int> pick_pg(0, 47);
  std::uniform_int_distribution<int> pick_p(0, 7);
  const auto ps = PGate::all();
  const auto gs = GGate::all();

  RBSequence seq;
  seq.gates.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int k = pick_pg(rng);
    seq.gates.push_back({ps[k / 6], gs[k % 6]});
  }
  Recovery& rec = seq.recovery;
  rec.pre = ps[pick_p(rng)];
  rec.r = invert(compose(rec.pre.clifford(), seq.accumulated()));
  const auto& options = recovery_decompositions(rec.r);
  std::uniform_int_distribution<std::size_t> pick_decomp(0, options.size() - 1);
  rec.r_steps = options[pick_decomp(rng)];
  rec.post = ps[pick_p(rng)];
  return seq;
}

int readout_sign(const RBSequence& seq) {
  const int s = seq.net().z_to_z();
  if (s == 0) throw InvalidInput("sequence does not return z to +-z");
  return s;
}

std::string to_text(const RBSequence& seq) {
  std::ostringstream os;
  for (const PGStep& step : seq.gates) {
    os << step.p.name() << '*' << step.g.name() << ' ';
  }
  const Recovery& rec = seq.recovery;
  os << "| " << rec.pre.name() << " R(" << rec.r_steps.p.name();
  for (auto it = rec.r_steps.g.rbegin(); it != rec.r_steps.g.rend(); ++it) {
    os << '*' << it->name();
  }
  os << ") " << rec.post.name();
  return os.str();
}

RBSequence parse_rb_sequence(std::string_view text) {
  const auto halves = split_on(text, '|');
  if (halves.size() != 2) throw InvalidInput("sequence text needs exactly one '|'");
  RBSequence seq;
  for (std::string_view token : split_ws(halves[0])) {
    const auto parts = split_on(token, '*');
    if (parts.size() != 2) {
      throw InvalidInput("gate token '" + std::string(token) + "' is not P*G");
    }
    seq.gates.push_back({parse_pgate(parts[0]), parse_ggate(parts[1])});
  }
  const auto rec_tokens = split_ws(halves[1]);
  if (rec_tokens.size() != 3 || !rec_tokens[1].starts_with("R(") ||
      !rec_tokens[1].ends_with(")")) {
    throw InvalidInput("recovery must read '<P> R(<P>[*<G>...]) <P>'");
  }
  Recovery& rec = seq.recovery;
  rec.pre = parse_pgate(rec_tokens[0]);
  rec.post = parse_pgate(rec_tokens[2]);
  std::string_view inner = rec_tokens[1];
  inner.remove_prefix(2);
  inner.remove_suffix(1);
  const auto parts = split_on(inner, '*');
  if (parts.size() > 3) throw InvalidInput("recovery R has more than two G steps");
  rec.r_steps.p = parse_pgate(parts[0]);
  for (std::size_t i = parts.size(); i-- > 1;) {
    rec.r_steps.g.push_back(parse_ggate(parts[i]));
  }
  rec.r = rec.r_steps.clifford();
  readout_sign(seq);
  return seq;
}

CompiledSequence compile_sequence(const RBSequence& seq, SchemeId scheme,
                                  const SchemeParams& params) {
  ScheduleBuilder b(params.omega1);
  for (std::size_t i = 0; i < seq.gates.size(); ++i) {
    b.append(compile_gate(seq.gates[i].p, seq.gates[i].g, scheme, params, i));
  }
  const GateStyle style = gate_style(scheme);
  const Recovery& rec = seq.recovery;
  emit_p(b, rec.pre, style, params, false);
  for (const GGate& g : rec.r_steps.g) emit_g(b, g, style, params, false);
  emit_p(b, rec.r_steps.p, style, params, false);
  emit_p(b, rec.post, style, params, false);

  CompiledSequence out;
  out.program = b.build();
  out.gate_period = gate_period(scheme, params);
  const double zz = out.program.ideal().so3()(2, 2);
  if (std::abs(std::abs(zz) - 1.0) > 1e-8) {
    throw std::logic_error("compiled sequence does not map z to +-z");
  }
  out.readout_sign = zz > 0 ? 1 : -1;
  return out;
}

}  // namespace rbsim
