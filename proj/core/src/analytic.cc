// Copyright 2026 The Dilemma Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dilemma_lab/analytic.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace dilemma_lab {
namespace {

using Rational = boost::multiprecision::cpp_rational;

// Shortest decimal representation of v as an exact rational, so 0.3 maps to
// 3/10 rather than its binary expansion.
Rational DecimalRational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite parameter");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::scientific);
  std::string text(buf, res.ptr);
  const auto e = text.find('e');
  const int exponent = std::stoi(text.substr(e + 1));
  std::string mantissa = text.substr(0, e);
  bool negative = false;
  if (mantissa[0] == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  int frac_digits = 0;
  const auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    frac_digits = static_cast<int>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  boost::multiprecision::cpp_int digits(mantissa);
  const int shift = exponent - frac_digits;
  boost::multiprecision::cpp_int ten_pow = boost::multiprecision::pow(
      boost::multiprecision::cpp_int(10), std::abs(shift));
  Rational r = shift >= 0 ? Rational(digits * ten_pow)
                          : Rational(digits, ten_pow);
  return negative ? -r : r;
}

std::string Text(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double ToDouble(const Rational& r) { return r.convert_to<double>(); }

// Exchanged payoff of one (own action, co-player profile) pair as a line in
// s: value(s) = a + s * b.
struct Line {
  Rational a, b;
  Rational At(const Rational& s) const { return a + s * b; }
};

Line ExchangedLine(const Rational& own, const Rational& others_sum, int n) {
  const Rational mean_others = others_sum / (n - 1);
  return Line{mean_others, own - mean_others};
}

// For every decision context (player, co-player profile) the candidate
// actions' lines; `labels[k]` names action k in regime labels.
struct Problem {
  std::vector<std::vector<Line>> contexts;
  std::vector<std::string> action_labels;
  // Regime label if a given action is the common strict best response.
  std::map<int, std::string> regime_of_action;
  std::set<Rational> extra_candidates;
};

std::string Classify(const Problem& p, const Rational& s) {
  int common = -1;
  for (const auto& ctx : p.contexts) {
    int best = -1;
    Rational best_v;
    bool unique = false;
    for (int k = 0; k < static_cast<int>(ctx.size()); ++k) {
      const Rational v = ctx[k].At(s);
      if (best < 0 || v > best_v) {
        best = k;
        best_v = v;
        unique = true;
      } else if (v == best_v) {
        unique = false;
      }
    }
    if (!unique) return "none";
    if (common < 0) {
      common = best;
    } else if (best != common) {
      return "none";
    }
  }
  const auto it = p.regime_of_action.find(common);
  return it != p.regime_of_action.end() ? it->second : "none";
}

struct Piece {
  Rational lo, hi;
  bool lo_closed, hi_closed;
  std::string label;
};

AnalyticResult Solve(const Problem& p, const std::string& game,
                     const std::string& cooperative_label,
                     double s_resolution) {
  if (!(s_resolution > 0.0 && s_resolution <= 1.0)) {
    throw std::invalid_argument("s resolution must lie in (0, 1]");
  }
  std::set<Rational> points = p.extra_candidates;
  points.insert(Rational(1));
  // Crossing points of every pair of lines within a context.
  for (const auto& ctx : p.contexts) {
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      for (std::size_t j = i + 1; j < ctx.size(); ++j) {
        const Rational db = ctx[i].b - ctx[j].b;
        if (db == 0) continue;
        const Rational root = (ctx[j].a - ctx[i].a) / db;
        if (root > 0 && root <= 1) points.insert(root);
      }
    }
  }
  const int steps = static_cast<int>(std::lround(1.0 / s_resolution));
  for (int k = 1; k <= steps; ++k) points.insert(Rational(k, steps));
  for (auto it = points.begin(); it != points.end();) {
    if (*it <= 0 || *it > 1) it = points.erase(it); else ++it;
  }

  // Labels are constant between consecutive candidates since every
  // comparison is linear in s and all roots are candidates.
  AnalyticResult out;
  out.game = game;
  out.cooperative_label = cooperative_label;
  std::vector<Piece> pieces;
  Rational prev = 0;
  for (const Rational& x : points) {
    const Rational mid = (prev + x) / 2;
    pieces.push_back({prev, x, false, false, Classify(p, mid)});
    pieces.push_back({x, x, true, true, Classify(p, x)});
    out.evaluated_points += 2;
    prev = x;
  }
  std::vector<Piece> merged;
  for (auto& piece : pieces) {
    if (!merged.empty() && merged.back().label == piece.label) {
      merged.back().hi = piece.hi;
      merged.back().hi_closed = piece.hi_closed;
    } else {
      merged.push_back(std::move(piece));
    }
  }
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const Piece& m = merged[i];
    out.regimes.push_back(Regime{ToDouble(m.lo), ToDouble(m.hi), m.lo_closed,
                                 m.hi_closed, Text(m.lo), Text(m.hi),
                                 m.label});
    if (i > 0) {
      const double b = ToDouble(m.lo);
      if (out.boundaries.empty() || out.boundaries.back() != b) {
        out.boundaries.push_back(b);
      }
    }
  }
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    if (it->label == cooperative_label) {
      out.s_star = ToDouble(it->hi);
      out.s_star_text = Text(it->hi);
      out.s_star_closed = it->hi_closed;
      break;
    }
  }
  return out;
}

}  // namespace

AnalyticResult AnalyzeMatrixGame(const MatrixGame& game, int cooperate_action,
                                 int defect_action, double s_resolution) {
  const int n = game.num_players();
  if (n < 2) throw std::invalid_argument("analytic: need >= 2 players");
  for (int i = 0; i < n; ++i) {
    const int m = game.num_actions(i);
    if (cooperate_action < 0 || cooperate_action >= m || defect_action < 0 ||
        defect_action >= m || cooperate_action == defect_action) {
      throw std::invalid_argument("analytic: bad cooperate/defect actions");
    }
  }
  std::vector<Rational> payoffs;
  for (double v : game.payoffs()) payoffs.push_back(DecimalRational(v));

  Problem p;
  p.regime_of_action = {{cooperate_action, "cooperate"},
                        {defect_action, "defect"}};
  for (int i = 0; i < n; ++i) {
    // Enumerate co-player profiles by iterating joint actions with player
    // i's action fixed to 0.
    for (int joint = 0; joint < game.num_joint_actions(); ++joint) {
      std::vector<int> actions = game.JointAction(joint);
      if (actions[i] != 0) continue;
      std::vector<Line> ctx;
      for (int a = 0; a < game.num_actions(i); ++a) {
        actions[i] = a;
        const int idx = game.JointIndex(actions);
        Rational others = 0;
        for (int j = 0; j < n; ++j) {
          if (j != i) others += payoffs[static_cast<std::size_t>(idx) * n + j];
        }
        ctx.push_back(ExchangedLine(
            payoffs[static_cast<std::size_t>(idx) * n + i], others, n));
      }
      p.contexts.push_back(std::move(ctx));
    }
  }
  return Solve(p, game.name(), "cooperate", s_resolution);
}

AnalyticResult AnalyzePgg(const PGGParams& params, double s_resolution) {
  ValidatePgg(params);
  const int n = params.n;
  const Rational k1 = DecimalRational(params.k1);
  const Rational k2 = DecimalRational(params.k2);
  const Rational cx = DecimalRational(params.cx);
  auto share = [&](const Rational& c) {
    return k1 * (c < cx ? c : cx) + k2 * (c > cx ? c - cx : Rational(0));
  };

  std::set<Rational> own_set{Rational(0), cx, Rational(1)};
  for (int a = 0; a < params.grid; ++a) {
    own_set.insert(Rational(a, params.grid - 1));
  }
  const std::vector<Rational> own(own_set.begin(), own_set.end());

  Problem p;
  for (int k = 0; k < static_cast<int>(own.size()); ++k) {
    if (own[k] == 1) p.regime_of_action[k] = "full";
    else if (own[k] == cx) p.regime_of_action[k] = "partial";
    else if (own[k] == 0) p.regime_of_action[k] = "defect";
  }
  if (cx == 1) p.regime_of_action[static_cast<int>(own.size()) - 1] = "full";

  // Co-player multisets: z players at 0, x at cx, the rest at 1.
  const int m = n - 1;
  for (int z = 0; z <= m; ++z) {
    for (int x = 0; z + x <= m; ++x) {
      const int f = m - z - x;
      const Rational others_c = x * cx + f;
      const Rational others_fund = x * share(cx) + f * share(Rational(1));
      std::vector<Line> ctx;
      for (const Rational& c : own) {
        const Rational fund = others_fund + share(c);
        const Rational raw = 1 - c + fund / n;
        const Rational others_raw = m * (1 + fund / n) - others_c;
        ctx.push_back(ExchangedLine(raw, others_raw, n));
      }
      p.contexts.push_back(std::move(ctx));
    }
  }
  p.extra_candidates = {k1 / n, k2 / n};
  return Solve(p, "pgg", "full", s_resolution);
}

nlohmann::json AnalyticResultToJson(const AnalyticResult& r) {
  using nlohmann::json;
  json regimes = json::array();
  for (const auto& g : r.regimes) {
    const std::string text = std::string(g.lo_closed ? "[" : "(") + g.lo_text +
                             ", " + g.hi_text + (g.hi_closed ? "]" : ")");
    regimes.push_back({{"lo", g.lo}, {"hi", g.hi},
                       {"lo_closed", g.lo_closed}, {"hi_closed", g.hi_closed},
                       {"interval", text}, {"label", g.label}});
  }
  json out{{"game", r.game},
           {"regimes", regimes},
           {"boundaries", r.boundaries},
           {"cooperative_label", r.cooperative_label},
           {"evaluated_points", r.evaluated_points}};
  if (r.s_star) {
    out["s_star"] = {{"value", *r.s_star},
                     {"exact", r.s_star_text},
                     {"closed", r.s_star_closed}};
  } else {
    out["s_star"] = nullptr;
  }
  return out;
}

}  // namespace dilemma_lab
