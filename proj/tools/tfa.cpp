// tfa: batch command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfa/tfa.h"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

const std::map<std::string, Flag> kFlags = {
    {"value", {"--value", "real input (rat:, dec:, sqrt:, golden, cf:[...])"}},
    {"alpha", {"--alpha", "frequency alpha (real grammar)"}},
    {"beta", {"--beta", "frequency beta (real grammar)"}},
    {"c0", {"--c0", "coefficient C0 (<re>+<im>i)"}},
    {"c1", {"--c1", "coefficient C1 (<re>+<im>i)"}},
    {"c2", {"--c2", "coefficient C2 (<re>+<im>i)"}},
    {"depth", {"--depth", "continued-fraction depth"}},
    {"n", {"--n", "convergent index"}},
    {"cap", {"--cap", "brute-force scan cap"}},
    {"ks", {"--ks", "strictly increasing integers, comma separated"}},
    {"x", {"--x", "base point (real grammar)"}},
    {"points", {"--points", "CSV file with one real per line"}},
    {"count", {"--count", "number of factors, or of multiples of --value"}},
    {"delta", {"--delta", "measure budget (rational)"}},
    {"samples", {"--samples", "number of sampled points"}},
    {"seed", {"--seed", "generator seed"}},
    {"qk", {"--qk", "summation length Q_k"}},
    {"gamma-lo", {"--gamma-lo", "admissibility constant gamma (rational)"}},
    {"gamma-hi", {"--gamma-hi", "admissibility constant gamma-hat (rational)"}},
    {"case", {"--case", "auto or force2"}},
    {"grid", {"--grid", "lower-bound grid size per axis"}},
    {"s", {"--s", "pigeonhole threshold s in (0, 1) (rational)"}},
    {"c", {"--c", "quotient filter constant c > 0 (rational)"}},
    {"index", {"--index", "certificate index (0 = smallest)"}},
    {"radius", {"-M,--radius", "orbit radius M"}},
    {"config", {"--config", "CSV file with four rows a,b"}},
};

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> flags;
};

const std::vector<std::string> kPoly = {"alpha", "beta", "c0", "c1", "c2"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

const std::vector<Command> kCommands = {
    {"cf", "continued fraction and convergents", {"value", "depth"}},
    {"best-approx", "exhaustive best-approximation check at index n", {"value", "n", "cap"}},
    {"quality", "two-sided estimate for ||q_n x|| (one n, or n = 1..depth-1)", {"value", "n", "depth"}},
    {"zeros", "torus zeros and slope parameters", {"c0", "c1", "c2"}},
    {"lower-bound", "empirical lower-bound constant on a grid", {"c0", "c1", "c2", "grid"}},
    {"gap", "pairwise gap check", {"value", "n", "ks"}},
    {"lemma3", "reciprocal-sum bound", {"value", "n", "ks", "x"}},
    {"excset", "exceptional set for a point list", {"points", "value", "count", "delta"}},
    {"outside-sums", "sum bounds sampled outside the exceptional set",
     {"points", "value", "count", "delta", "samples", "seed"}},
    {"prodsum", "reciprocal sum of |P(x+n)| against its bound",
     with(kPoly, {"qk", "gamma-lo", "gamma-hi", "delta", "samples", "seed", "case", "grid"})},
    {"classify", "finite-depth condition classifier for alpha/beta",
     {"value", "alpha", "beta", "depth"}},
    {"nk", "N_k certificates", {"alpha", "beta", "s", "depth", "c"}},
    {"product", "log of prod_{j<count} P(x+j)", with(kPoly, {"x", "count"})},
    {"orbit", "orbit trace of f(x+n)/f(x) for |n| <= M", with(kPoly, {"x", "radius"})},
    {"keyth", "shifted product comparison",
     with(kPoly, {"s", "depth", "c", "delta", "samples", "seed", "index", "case"})},
    {"normalize", "normalise a four-point configuration", {"config"}},
    {"report", "classify, zeros, nk, prodsum and keyth in one report",
     with(kPoly, {"depth", "s", "c", "delta", "samples", "seed", "index", "case", "grid"})},
};

int emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(outPath);
  if (!out) {
    std::cerr << "error: cannot write " << outPath << "\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified continued-fraction, Diophantine and product-growth toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string digits, threads, format = "json", out;
  app.add_option("--digits", digits, "working precision in decimal digits (env TFA_DIGITS)");
  app.add_option("--threads", threads, "worker threads (default: available parallelism)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out, "write the report to this file");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    for (const auto& key : cmd.flags) {
      const Flag& f = kFlags.at(key);
      options[cmd.name][key] = sub->add_option(f.name, values[cmd.name][key], f.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::vector<std::string> keys, vals;
  for (const auto& [key, opt] : options[name]) {
    if (opt->count() > 0) {
      keys.push_back(key);
      vals.push_back(values[name][key]);
    }
  }
  if (!digits.empty()) {
    keys.push_back("digits");
    vals.push_back(digits);
  }
  if (!threads.empty()) {
    keys.push_back("threads");
    vals.push_back(threads);
  }
  std::vector<const char*> k, v;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    k.push_back(keys[i].c_str());
    v.push_back(vals[i].c_str());
  }

  tfa_report* report = nullptr;
  const tfa_status status = tfa_run(name.c_str(), k.data(), v.data(), k.size(), &report);
  if (status != TFA_OK) {
    std::cerr << "error: " << tfa_status_name(status) << ": " << tfa_last_error() << "\n";
    if (const int hint = tfa_last_error_suggested_digits(); hint > 0) {
      std::cerr << "hint: rerun with --digits " << hint << "\n";
    }
    if (status == TFA_ERR_USAGE) std::cerr << sub->help();
    return 2;
  }

  int code = 0;
  if (format == "csv") {
    const std::string csv = tfa_report_csv(report);
    if (csv.empty()) {
      std::cerr << "error: " << name << " has no CSV form; use --format json\n";
      code = 2;
    } else {
      code = emit(csv, out);
    }
  } else {
    code = emit(std::string(tfa_report_json(report)) + "\n", out);
  }
  if (code == 0 && !tfa_report_all_pass(report)) code = 1;
  tfa_report_free(report);
  return code;
}
