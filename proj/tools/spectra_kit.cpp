// spectra-kit: JSON report on stdout, summary on stderr, exit code = status.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spectra/spectra.h"

namespace {

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<const char*> c_ids(const std::vector<std::string>& ids) {
  std::vector<const char*> out;
  for (const auto& s : ids) out.push_back(s.c_str());
  return out;
}

const char* status_word(spk_status s) {
  switch (s) {
    case SPK_OK: return "ok";
    case SPK_VIOLATION: return "violation";
    case SPK_INPUT_ERROR: return "input error";
    case SPK_RESOURCE_ERROR: return "resource limit";
    default: return "internal error";
  }
}

// Prints the payload, summarizes on stderr and maps the status to an exit code.
int finish(const std::string& cmd, spk_status s, char* json) {
  if (json) {
    std::cout << json;
    spk_string_free(json);
  }
  std::cerr << "spectra-kit " << cmd << ": " << status_word(s);
  const std::string err = spk_last_error();
  if (!err.empty()) std::cerr << ": " << err;
  std::cerr << "\n";
  return s == SPK_INTERNAL_ERROR ? 4 : static_cast<int>(s);
}

template <class Call>
int run(const std::string& cmd, Call call) {
  char* json = nullptr;
  const spk_status s = call(&json);
  return finish(cmd, s, json);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPECTRA_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "spectra-kit: ignoring malformed SPECTRA_SEED\n";
    }
  }
  return 1;
}

enum class Kind { Datum, Space, Tower, Other };

Kind kind_of(const std::string& path, std::string& schema) {
  char* s = nullptr;
  if (spk_file_schema(path.c_str(), &s) != SPK_OK) return Kind::Other;
  schema = s;
  spk_string_free(s);
  if (schema.empty() || schema == "stable-cat-tower/1") return Kind::Tower;
  if (schema == "stable-cat-datum/1") return Kind::Datum;
  if (schema == "finite-top/1") return Kind::Space;
  return Kind::Other;
}

struct Datum {
  spk_datum* h = nullptr;
  ~Datum() { spk_datum_free(h); }
};
struct Space {
  spk_space* h = nullptr;
  ~Space() { spk_space_free(h); }
};
struct Tower {
  spk_tower* h = nullptr;
  ~Tower() { spk_tower_free(h); }
};

spk_status load_tower(const std::string& path, std::optional<std::size_t> top, Tower& t) {
  spk_status s = spk_tower_load(path.c_str(), &t.h);
  if (s == SPK_OK && top) s = spk_tower_truncate(t.h, *top);
  return s;
}

// Runs an AR query and writes the quiver to `path` when one is given.
template <class Fn, class Handle>
spk_status write_dot(Fn fn, Handle h, const std::string& point, const std::string& path, char** json) {
  char* text = nullptr;
  const spk_status s = fn(h, point.c_str(), json, path.empty() ? nullptr : &text);
  if (text) {
    std::ofstream out(path);
    out << text;
    spk_string_free(text);
    if (!out) {
      std::cerr << "spectra-kit: cannot write " << path << "\n";
      return SPK_INPUT_ERROR;
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra-kit: closure, isolation and Cantor-Bendixson computations on finite stable category data"};
  app.require_subcommand(1);
  std::size_t jobs = 1;
  app.add_option("--jobs", jobs, "Worker cap (computations currently run on one worker)")->check(CLI::PositiveNumber);

  std::string input, set_csv, exclude, from_csv, functor, suite = "all", out, point, dot, family_csv;
  std::optional<std::size_t> top;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 200, bound = 4, n = 0, levels = 8;
  std::uint32_t p = 0;
  int ydeg = -1;
  bool fixed = false, include_core = false;

  auto* validate = app.add_subcommand("validate", "Check the axioms of a datum file");
  validate->add_option("datum", input)->required();

  auto* closure = app.add_subcommand("closure", "Closure of a point set with exclusion witnesses");
  closure->add_option("datum", input)->required();
  closure->add_option("--set", set_csv, "Comma-separated point ids")->required();

  auto* witness = app.add_subcommand("witness", "Exclusion witness for a point against a set");
  witness->add_option("datum", input)->required();
  witness->add_option("--exclude", exclude)->required();
  witness->add_option("--from", from_csv)->required();

  auto* isolated = app.add_subcommand("isolated", "Isolated points of a datum or space");
  isolated->add_option("input", input)->required();

  auto* cb = app.add_subcommand("cb-rank", "Cantor-Bendixson rank of a datum, space or tower");
  cb->add_option("input", input)->required();
  cb->add_option("--top", top, "Truncate a tower to its first N levels")->check(CLI::PositiveNumber);
  cb->add_option("--bound", bound, "Multiplicity bound for limit witnesses");

  auto* sigma = app.add_subcommand("sigma", "Whether a functor vanishes on a point set");
  sigma->add_option("datum", input)->required();
  sigma->add_option("--functor", functor)->required();
  sigma->add_option("--set", set_csv)->required();

  auto* check = app.add_subcommand("check", "Run property suites");
  check->add_option("input", input)->required();
  check->add_option("--suite", suite)
      ->check(CLI::IsMember({"kuratowski", "t1", "serre", "perp", "routes", "all"}));
  check->add_option("--samples", samples);
  check->add_option("--seed", seed, "Defaults to SPECTRA_SEED, then 1");

  auto* gen_pack = app.add_subcommand("gen-pack", "Generate a finite-type pack");
  gen_pack->add_option("family", input)->required()->check(CLI::IsMember({"an"}));
  gen_pack->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gen_pack->add_option("--p", p, "Field characteristic (default 32003)");
  gen_pack->add_option("-o,--output", out)->required();

  auto* gen_tower = app.add_subcommand("gen-tower", "Generate a truncation tower");
  gen_tower->add_option("family", input)->required()->check(CLI::IsMember({"ainf"}));
  gen_tower->add_option("--levels", levels)->check(CLI::PositiveNumber);
  gen_tower->add_option("--ydeg", ydeg, "Truncation degree (default 3 x levels)");
  gen_tower->add_option("--p", p);
  gen_tower->add_option("-o,--output", out)->required();

  auto* chain = app.add_subcommand("tower-chain", "Witness-failure chain and AR stabilization of a point");
  chain->add_option("tower", input)->required();
  chain->add_option("--exclude", exclude)->required();
  chain->add_option("--top", top)->check(CLI::PositiveNumber);
  chain->add_flag("--fixed", fixed, "Keep the prefix set fixed at later levels");

  auto* limit = app.add_subcommand("tower-closure", "Bounded limit-closure evidence for a point");
  limit->add_option("tower", input)->required();
  limit->add_option("--point", point)->required();
  limit->add_option("--family", family_csv, "Comma-separated ids (default: all locally free points)");
  limit->add_flag("--include-core", include_core);
  limit->add_option("--bound", bound);
  limit->add_option("--top", top)->check(CLI::PositiveNumber);

  auto* ar = app.add_subcommand("ar", "Minimal right almost split map into a point");
  ar->add_option("input", input)->required();
  ar->add_option("--point", point)->required();
  ar->add_option("--dot", dot, "Write the AR quiver as DOT");
  ar->add_option("--top", top)->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify-pack", "Certify a pack against its oracle");
  verify->add_option("pack", input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  spk_status s = SPK_OK;
  std::string schema;

  if (sub == gen_pack) return run(cmd, [&](char** j) { return spk_gen_pack_an(n, p, out.c_str(), j); });
  if (sub == gen_tower) {
    const int T = ydeg >= 0 ? ydeg : static_cast<int>(3 * levels);
    return run(cmd, [&](char** j) { return spk_gen_tower_ainf(levels, T, p, out.c_str(), j); });
  }
  if (sub == verify) return run(cmd, [&](char** j) { return spk_verify_pack(input.c_str(), j); });

  const Kind kind = kind_of(input, schema);
  auto wrong = [&](const char* expected) {
    std::cerr << "spectra-kit " << cmd << ": input error: " << input << " is not " << expected;
    if (!schema.empty()) std::cerr << " (schema '" << schema << "')";
    std::cerr << "\n";
    return 2;
  };
  if (kind == Kind::Other && schema.empty()) {
    char* sc = nullptr;
    return finish(cmd, spk_file_schema(input.c_str(), &sc), nullptr);
  }

  if (kind == Kind::Tower) {
    Tower t;
    if ((s = load_tower(input, top, t)) != SPK_OK) return finish(cmd, s, nullptr);
    if (sub == cb) return run(cmd, [&](char** j) { return spk_cb_rank_tower(t.h, bound, j); });
    if (sub == chain) return run(cmd, [&](char** j) { return spk_tower_chain(t.h, exclude.c_str(), fixed ? 1 : 0, j); });
    if (sub == limit) {
      const auto ids = split_ids(family_csv);
      const auto cids = c_ids(ids);
      const char* const* fam = family_csv.empty() ? nullptr : cids.data();
      return run(cmd, [&](char** j) { return spk_limit_closure(t.h, point.c_str(), fam, cids.size(), include_core ? 1 : 0, bound, j); });
    }
    if (sub == ar) {
      return run(cmd, [&](char** j) { return write_dot(spk_ar_tower, t.h, point, dot, j); });
    }
    if (sub == validate) return run(cmd, [&](char** j) { return spk_tower_verify(t.h, j); });
    return wrong("a datum or space file");
  }
  if (sub == chain || sub == limit) return wrong("a tower");

  if (kind == Kind::Space) {
    Space sp;
    if ((s = spk_space_load(input.c_str(), &sp.h)) != SPK_OK) return finish(cmd, s, nullptr);
    if (sub == isolated) return run(cmd, [&](char** j) { return spk_isolated_space(sp.h, j); });
    if (sub == cb) return run(cmd, [&](char** j) { return spk_cb_rank_space(sp.h, j); });
    if (sub == check) return run(cmd, [&](char** j) { return spk_check_space(sp.h, suite.c_str(), samples, resolve_seed(seed), j); });
    return wrong("a datum file");
  }
  if (kind != Kind::Datum) return wrong("a datum file");

  Datum d;
  if ((s = spk_datum_load(input.c_str(), &d.h)) != SPK_OK) return finish(cmd, s, nullptr);
  if (sub == validate) return run(cmd, [&](char** j) { return spk_validate(d.h, j); });
  if (sub == closure) {
    const auto ids = split_ids(set_csv);
    const auto cids = c_ids(ids);
    return run(cmd, [&](char** j) { return spk_closure(d.h, cids.data(), cids.size(), j); });
  }
  if (sub == witness) {
    const auto ids = split_ids(from_csv);
    const auto cids = c_ids(ids);
    return run(cmd, [&](char** j) { return spk_witness(d.h, exclude.c_str(), cids.data(), cids.size(), j); });
  }
  if (sub == sigma) {
    const auto ids = split_ids(set_csv);
    const auto cids = c_ids(ids);
    return run(cmd, [&](char** j) { return spk_sigma(d.h, functor.c_str(), cids.data(), cids.size(), j); });
  }
  if (sub == isolated) return run(cmd, [&](char** j) { return spk_isolated_datum(d.h, j); });
  if (sub == cb) return run(cmd, [&](char** j) { return spk_cb_rank_datum(d.h, j); });
  if (sub == check) return run(cmd, [&](char** j) { return spk_check_datum(d.h, suite.c_str(), samples, resolve_seed(seed), j); });
  if (sub == ar) {
    return run(cmd, [&](char** j) { return write_dot(spk_ar_datum, d.h, point, dot, j); });
  }
  return wrong("a tower");
}
