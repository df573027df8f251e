/*
 * Copyright 2026 The MAPDA-MIR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.hpp"

#include "mapda/array_io.hpp"
#include "mapda/engine.hpp"
#include "mapda/metrics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace mapda::cli {

namespace {

constexpr std::uint64_t kLibrarySalt = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kDemandSalt = 0xD1B54A32D192ED03ULL;
constexpr int kChannelRetries = 3;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string profile_line(const Mapda& m) {
  const auto& p = m.profile();
  std::string s = m.parameters() + " MAPDA, t=" + p.t.str() + ", sum-DoF=" + p.sum_dof.str() +
                  ", min_antennas=" + std::to_string(p.min_antennas) + (p.regular ? ", regular" : ", irregular");
  if (!p.star_density_ok) s += ", t < L";
  return s;
}

std::string slurp(const std::string& path, std::istream& in) {
  std::ostringstream os;
  if (path == "-") {
    os << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    os << f.rdbuf();
  }
  return os.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

// ------------------------------------------------------------------ validate

struct ValidateArgs {
  std::string file = "-";
  int antennas = 0;  // 0: use the header
};

int cmd_validate(const ValidateArgs& a, Io io) {
  std::istringstream text(slurp(a.file, io.in));
  MapdaFile file = parse_mapda(text);
  const int L = a.antennas > 0 ? a.antennas : file.antennas;
  const ValidationReport rep = validate(file.grid, L);

  auto line = [&](const char* name, const ConditionCheck& c) {
    io.out << name << ' ' << (c.ok ? "pass" : "FAIL");
    if (!c.detail.empty()) io.out << ": " << c.detail;
    io.out << '\n';
  };
  line("C1", rep.c1);
  line("C2", rep.c2);
  line("C3", rep.c3);
  line("C4", rep.c4);

  bool ok = rep.passed();
  if (ok && file.stars && rep.stars_per_col && *file.stars != *rep.stars_per_col) {
    io.out << "header declares Z=" << *file.stars << " but columns hold " << *rep.stars_per_col << " stars\n";
    ok = false;
  }
  if (ok && file.slots && *file.slots != rep.slots) {
    io.out << "header declares S=" << *file.slots << " but the largest id is " << rep.slots << '\n';
    ok = false;
  }
  if (!ok) {
    io.out << "not a MAPDA at L=" << L;
    if (!rep.c4.ok) io.out << ": C4 " << rep.c4.detail;
    io.out << '\n';
    return kDomainFailure;
  }
  io.out << profile_line(Mapda::create(file.grid, L)) << '\n';
  return kOk;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind;
  int users = 0;
  int cached = 0;
  int copies = 0;
  std::string in = "-";
  std::string out;
};

int cmd_gen(const GenArgs& a, Io io) {
  Mapda m = [&] {
    if (a.kind == "mn") return generate_mn_pda(a.users, a.cached);
    if (a.kind == "cyclic") return generate_cyclic(a.users, a.cached);
    std::istringstream text(slurp(a.in, io.in));
    return replicate(read_mapda(text), a.copies);
  }();
  emit(a.out, to_text(m), io.out);
  // Keep stdout a clean array when it is the data channel.
  (a.out.empty() || a.out == "-" ? io.err : io.out) << profile_line(m) << '\n';
  return kOk;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string file = "-";
  int files = 0;
  std::string demands;
  std::string channel;
  std::string library;
  std::uint64_t seed = 0;
  std::string scalar = "auto";
  bool force = false;
  std::string out;
};

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("MAPDA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("MAPDA_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return flag;
}

DemandVector make_demands(const std::string& spec, int users, int files, std::uint64_t seed) {
  if (spec.empty()) return DemandVector::round_robin(users, files);
  std::vector<int> d;
  if (spec == "random") {
    std::mt19937_64 rng(seed ^ kDemandSalt);
    std::uniform_int_distribution<int> pick(1, files);
    for (int k = 0; k < users; ++k) d.push_back(pick(rng));
  } else {
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ',');) {
      try {
        std::size_t used = 0;
        d.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("malformed demand '" + tok + "'");
      }
    }
    if (static_cast<int>(d.size()) != users)
      throw ParseError("--demands lists " + std::to_string(d.size()) + " users, the array has " +
                       std::to_string(users));
  }
  return DemandVector(std::move(d), files);
}

template <Field S>
int simulate_with(const SimulateArgs& a, const SchemeInstance& inst, const DemandVector& demands,
                  std::uint64_t seed, Io io) {
  const Mapda& m = inst.mapda;
  const Matrix<S> library = a.library.empty() ? random_library<S>(inst.files(), m.rows(), seed + kLibrarySalt)
                                              : read_library<S>(a.library);
  const DeliveryOptions options{a.force};

  std::optional<DeliveryReport> report;
  if constexpr (ScalarTraits<S>::exact) {
    const ChannelMatrix<Rational> h =
        a.channel.empty() ? cauchy_channel(m.antennas(), m.users()) : read_channel<Rational>(a.channel);
    report = run_delivery(inst, h, demands, library, options);
  } else {
    if (!a.channel.empty()) {
      report = run_delivery(inst, read_channel<Complex>(a.channel), demands, library, options);
    } else {
      // A singular draw has probability zero; retry a few seeds before giving up.
      for (int attempt = 0;; ++attempt) {
        try {
          report = run_delivery(inst, random_channel(m.antennas(), m.users(), seed + attempt), demands, library,
                                options);
          break;
        } catch (const DegenerateChannel&) {
          if (attempt == kChannelRetries) throw;
        }
      }
    }
  }

  emit(a.out, report->to_json() + "\n", io.out);
  if (report->complete) return kOk;
  for (const auto& s : report->slots)
    if (!s.feasible) io.err << "error: Infeasible at slot " << s.slot << " (t < L)\n";
  return kDomainFailure;
}

int cmd_simulate(const SimulateArgs& a, Io io) {
  std::istringstream text(slurp(a.file, io.in));
  const Mapda m = read_mapda(text);
  if (a.files < 1) throw ParseError("--files must be at least 1");
  const std::uint64_t seed = effective_seed(a.seed);
  const SchemeInstance inst = build_instance(m, a.files);
  const DemandVector demands = make_demands(a.demands, m.users(), a.files, seed);

  std::string backend = a.scalar;
  if (backend == "auto") {
    const bool rational = (a.channel.empty() || channel_file_is_rational(a.channel)) &&
                          (a.library.empty() || channel_file_is_rational(a.library));
    backend = rational ? "exact" : "float";
  }
  if (backend == "exact") return simulate_with<Rational>(a, inst, demands, seed, io);
  return simulate_with<Complex>(a, inst, demands, seed, io);
}

// ------------------------------------------------------------------ compare / sweep

std::vector<TablePoint> points_from_flags(const std::vector<std::string>& specs) {
  std::vector<TablePoint> out;
  for (const auto& spec : specs) {
    std::string line = spec;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    auto parsed = parse_points(is);
    out.insert(out.end(), parsed.begin(), parsed.end());
  }
  return out;
}

struct CompareArgs {
  std::string points;
  std::vector<std::string> point;
  std::string out;
};

int cmd_compare(const CompareArgs& a, Io io) {
  std::vector<TablePoint> pts;
  if (!a.points.empty()) {
    std::istringstream text(slurp(a.points, io.in));
    pts = parse_points(text);
  }
  auto extra = points_from_flags(a.point);
  pts.insert(pts.end(), extra.begin(), extra.end());
  std::ostringstream os;
  write_table(os, pts);
  emit(a.out, os.str(), io.out);
  return kOk;
}

struct SweepArgs {
  std::vector<int> users;
  std::vector<std::string> ratios;
  std::vector<int> antennas;
  std::string out;
  std::string plot;
  int plot_users = 150;
  int plot_antennas = 10;
  int plot_m = 0;
};

int cmd_sweep(const SweepArgs& a, Io io) {
  std::ostringstream os;
  os << table_header() << '\n';
  for (int K : a.users)
    for (const auto& r : a.ratios)
      for (int L : a.antennas) {
        try {
          os << table_csv_line(table_row(TablePoint{SystemPoint(K, Rational::parse(r), L), {}, {}, {}, {}}))
             << '\n';
        } catch (const Error& e) {
          // An unusable point still gets its row so the grid stays rectangular.
          std::string why = e.what();
          std::replace(why.begin(), why.end(), ',', ';');
          os << K << ',' << r << ',' << L << ',';
          for (int i = 0; i < 18; ++i) os << "n/a(invalid point),";
          os << "invalid-point(" << why << ")\n";
        }
      }
  emit(a.out, os.str(), io.out);
  if (!a.plot.empty()) {
    std::ostringstream plot;
    write_sweep_plot(plot, a.plot_users, a.plot_antennas,
                     a.plot_m > 0 ? std::optional<int>(a.plot_m) : std::nullopt);
    emit(a.plot, plot.str(), io.out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-antenna placement delivery arrays: validation, generation, delivery, metrics"};
  app.name("mapda");
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "check conditions C1-C4 of an array file");
  validate_cmd->add_option("file", va.file, "array file, '-' for stdin")->capture_default_str();
  validate_cmd->add_option("--antennas,-L", va.antennas, "antenna count to check (default: header L)")
      ->check(CLI::PositiveNumber);

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "generate an array");
  gen_cmd->require_subcommand(1);
  auto* gen_mn = gen_cmd->add_subcommand("mn", "t-subset PDA (valid at L=1)");
  gen_mn->add_option("--users,-K", ga.users, "K")->required();
  gen_mn->add_option("--t", ga.cached, "t")->required();
  gen_mn->add_option("--out,-o", ga.out, "output path (default stdout)");
  auto* gen_rep = gen_cmd->add_subcommand("replicate", "g side-by-side copies at g*L antennas");
  gen_rep->add_option("--copies,-g", ga.copies, "g")->required()->check(CLI::PositiveNumber);
  gen_rep->add_option("--in,-i", ga.in, "input array (default stdin)");
  gen_rep->add_option("--out,-o", ga.out, "output path (default stdout)");
  auto* gen_cyc = gen_cmd->add_subcommand("cyclic", "circulant array at L=K-t");
  gen_cyc->add_option("--users,-K", ga.users, "K")->required();
  gen_cyc->add_option("--t", ga.cached, "t")->required();
  gen_cyc->add_option("--out,-o", ga.out, "output path (default stdout)");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "run placement and delivery end to end");
  sim_cmd->add_option("file", sa.file, "array file, '-' for stdin");
  sim_cmd->add_option("--files,-N", sa.files, "library size N")->required();
  sim_cmd->add_option("--demands", sa.demands, "comma-separated d_1..d_K, or 'random'");
  sim_cmd->add_option("--channel", sa.channel, "channel fixture file");
  sim_cmd->add_option("--library", sa.library, "library fixture file");
  sim_cmd->add_option("--seed", sa.seed, "seed for random channel, library and demands")->capture_default_str();
  sim_cmd->add_option("--scalar", sa.scalar, "exact, float or auto")
      ->check(CLI::IsMember({"exact", "float", "auto"}))
      ->capture_default_str();
  sim_cmd->add_flag("--force", sa.force, "run even when t < L");
  sim_cmd->add_option("--out,-o", sa.out, "report path (default stdout)");

  CompareArgs ca;
  auto* cmp_cmd = app.add_subcommand("compare", "subpacketization and complexity table");
  cmp_cmd->add_option("--points", ca.points, "points file");
  cmp_cmd->add_option("--point", ca.point, "K,ratio,L (repeatable)");
  cmp_cmd->add_option("--out,-o", ca.out, "CSV path (default stdout)");

  SweepArgs wa;
  auto* sweep_cmd = app.add_subcommand("sweep", "table over a K x ratio x L grid, plus plot data");
  sweep_cmd->add_option("--users,-K", wa.users, "K values")->delimiter(',');
  sweep_cmd->add_option("--ratios", wa.ratios, "M/N values")->delimiter(',');
  sweep_cmd->add_option("--antennas,-L", wa.antennas, "L values")->delimiter(',');
  sweep_cmd->add_option("--out,-o", wa.out, "CSV path (default stdout)");
  sweep_cmd->add_option("--plot", wa.plot, "write log10 F plot data here");
  sweep_cmd->add_option("--plot-users", wa.plot_users, "K of the plot")->capture_default_str();
  sweep_cmd->add_option("--plot-antennas", wa.plot_antennas, "L of the plot")->capture_default_str();
  sweep_cmd->add_option("--plot-m", wa.plot_m, "fixed Scheme 1 m for the plot (default: best)");

  Io io{in, out, err};
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(va, io);
    if (gen_cmd->parsed()) {
      ga.kind = gen_mn->parsed() ? "mn" : gen_rep->parsed() ? "replicate" : "cyclic";
      return cmd_gen(ga, io);
    }
    if (sim_cmd->parsed()) return cmd_simulate(sa, io);
    if (cmp_cmd->parsed()) return cmd_compare(ca, io);
    if (sweep_cmd->parsed()) return cmd_sweep(wa, io);
  } catch (const SlotError& e) {
    err << "error: " << e.what() << " [slot " << e.slot() << "]\n";
    return kDomainFailure;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const RaggedGrid& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const NonPositiveSlotId& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kInputFailure;
}

}  // namespace mapda::cli
