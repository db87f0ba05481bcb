// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spectra/error.hpp"
#include "spectra/io.hpp"

using namespace spectra;

namespace {

const std::filesystem::path kPacks = SPECTRA_PACKS_DIR;
constexpr std::uint64_t kSeed = 20261018;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok && passed) {
      passed = false;
      detail.str("");
      detail << why;
    }
  }
};

CategoryDatum an(int n) { return io::load_datum(kPacks / ("a" + std::to_string(n) + ".json")); }

PackManifest an_manifest(int n) { return io::load_manifest(kPacks / ("a" + std::to_string(n) + ".manifest.json")); }

std::string id_n(std::size_t n) { return "I" + std::to_string(n); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 1: closure axioms on A1..A5; exhaustive for n <= 4, 200 sampled pairs for n = 5.
void kuratowski(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (int n = 1; n <= 5; ++n) {
    const auto r = kuratowski_check(an(n), 200, kSeed, n <= 4);
    checked += r.checked;
    o.require(r.passed, "A" + std::to_string(n) + ": axiom " + (r.violations.empty() ? "" : r.violations[0].axiom));
  }
  const double s = seconds_since(t0);
  o.require(s < 60.0, "runtime " + std::to_string(s) + " s exceeds 60 s");
  if (o.passed) o.detail << checked << " checks, " << s << " s";
}

// Every shipped datum-backed space, including each tower level.
std::vector<CategoryDatum> all_data() {
  std::vector<CategoryDatum> out;
  for (int n = 1; n <= 5; ++n) out.push_back(an(n));
  const auto t = io::load_tower(kPacks / "ainf-tower").tower;
  for (std::size_t lv = 1; lv <= t.height(); ++lv) out.push_back(t.level(lv));
  return out;
}

// Criterion 2: closure of every singleton is itself.
void t1(Outcome& o, const std::vector<CategoryDatum>& data) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t spaces = 0;
  for (const auto& d : data) {
    const auto r = t1_check(DatumSpace(d));
    ++spaces;
    o.require(r.passed, "a datum with points " + d.point(0).id + ".. fails T1");
  }
  const double s = seconds_since(t0);
  o.require(s < 5.0, "runtime " + std::to_string(s) + " s exceeds 5 s");
  if (o.passed) o.detail << spaces << " spaces, " << s << " s";
}

// Criterion 3: every subset closed, CB rank zero.
void discreteness(Outcome& o) {
  std::size_t subsets = 0;
  for (int n = 1; n <= 5; ++n) {
    const CategoryDatum d = an(n);
    for (std::uint64_t m = 0; m < (1u << n); ++m) {
      const PointSet s = subset_from_mask(d.point_count(), m);
      ++subsets;
      o.require(closure(d, s) == s, "A" + std::to_string(n) + " has a non-closed subset");
    }
    const CBReport r = cb_rank(DatumSpace(d));
    o.require(r.space_rank == std::optional<std::size_t>(0), "cb_rank(A" + std::to_string(n) + ") != 0");
  }
  if (o.passed) o.detail << subsets << " subsets closed; cb_rank 0 on A1..A5";
}

// Criterion 4: ideal route and witness route agree on every subset.
void routes(Outcome& o) {
  std::size_t subsets = 0, disagreements = 0;
  for (int n = 1; n <= 5; ++n) {
    const CategoryDatum d = an(n);
    for (std::uint64_t m = 0; m < (1u << n); ++m) {
      const PointSet s = subset_from_mask(d.point_count(), m);
      ++subsets;
      if (closure_by_ideal(d, s) != closure_by_witness(d, s)) ++disagreements;
    }
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  if (o.passed) o.detail << subsets << " subsets, 0 disagreements";
}

// Criterion 5: stable homs into every family point are nonzero, at every level.
void nonvanishing(Outcome& o, const TruncationTower& t, double gen_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  for (std::size_t lv = 1; lv <= t.height(); ++lv) {
    const auto& d = t.level(lv);
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto y = d.find_point(id_n(n));
      if (!y) continue;
      const FpFunctor rep = representable(d, *y);
      for (PointIndex x = 0; x < d.point_count(); ++x) {
        ++pairs;
        o.require(d.hom_dim(x, *y) >= 1, "stHom(" + d.point(x).id + ", " + id_n(n) + ") = 0 at level " +
                                             std::to_string(lv));
        PointSet s = d.empty_set();
        s.set(x);
        o.require(!in_sigma(d, rep, s), "Hom(-, " + id_n(n) + ") vanishes at " + d.point(x).id);
      }
    }
  }
  const double s = gen_seconds + seconds_since(t0);
  o.require(s < 120.0, "runtime " + std::to_string(s) + " s exceeds 120 s");
  if (o.passed) o.detail << pairs << " (level, X, I_n) triples, " << s << " s including generation";
}

// Criterion 6: tower rank 1 with I at 1 and every I_n at 0; DVR space rank 1.
void cb_bound(Outcome& o, const TruncationTower& t) {
  const auto r = tower_cb_rank(t, 4);
  o.require(r.report.space_rank == std::optional<std::size_t>(1), "tower space rank is not 1");
  for (std::size_t i = 0; i < r.report.points.size(); ++i) {
    const std::size_t want = r.report.points[i] == "I" ? 1 : 0;
    o.require(r.report.ranks[i] == std::optional<std::size_t>(want), "rank of " + r.report.points[i]);
  }
  for (const auto& w : r.warnings) o.require(w.kind != "conflict", "metadata conflict at " + w.point);
  const CBReport dvr = cb_rank(io::load_space(kPacks / "dvr-spec.json"));
  o.require(dvr.space_rank == std::optional<std::size_t>(1), "DVR space rank is not 1");
  if (o.passed) o.detail << "tower rank 1 (I: 1, I1..I8: 0), DVR rank 1";
}

// Criterion 7: AR stabilization dichotomy and the witness-failure chain of I.
void ar_dichotomy(Outcome& o, const TruncationTower& t) {
  std::ostringstream levels;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto r = ar_stabilization(t, id_n(n));
    o.require(r.kind == ArStabilization::Kind::Stable && r.level <= n + 2,
              id_n(n) + " not stable by level " + std::to_string(n + 2));
    levels << (n > 1 ? "," : "") << r.level;
  }
  const auto i = ar_stabilization(t, "I");
  o.require(i.kind == ArStabilization::Kind::GrowingUpTo && i.level == t.height(), "I is not growing to the top");
  const auto c = witness_failure_chain(t, "I", {1, 2, 3, 4, 5, 6});
  for (const auto& e : c.entries)
    o.require(e.witness && e.fails_at == std::optional<std::size_t>(e.prefix_level + 1),
              "level-" + std::to_string(e.prefix_level) + " witness does not fail at the next level");
  if (o.passed) o.detail << "I1..I6 stable from levels " << levels.str() << "; I growing to " << t.height()
                         << "; chain fails at N+1 for N=1..6";
}

// Criterion 8: sigma membership equals right perp membership.
void perp(Outcome& o) {
  std::size_t checked = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto r = perp_check(an(n), 50, kSeed);
    checked += r.checked;
    o.require(r.passed && r.mismatches == 0, "A" + std::to_string(n) + ": " + std::to_string(r.mismatches) +
                                                 " mismatches");
  }
  if (o.passed) o.detail << checked << " (functor, subset) pairs, 0 mismatches";
}

// Criterion 9: closed subsets and annihilator classes in bijection.
void serre(Outcome& o) {
  for (int n = 1; n <= 3; ++n) {
    const auto r = serre_correspondence_check(an(n));
    const std::size_t want = std::size_t{1} << n;
    o.require(r.passed && r.subsets == want && r.classes == want,
              "A" + std::to_string(n) + ": " + std::to_string(r.subsets) + " subsets, " + std::to_string(r.classes) +
                  " classes");
  }
  if (o.passed) o.detail << "2, 4, 8 subsets matched with 2, 4, 8 classes";
}

// Criterion 10: shipped packs certify; every single-coefficient edit is caught.
void certification(Outcome& o) {
  std::size_t mutations = 0;
  for (int n = 1; n <= 5; ++n) {
    const CategoryDatum d = an(n);
    const PackManifest m = an_manifest(n);
    const StableBuild rev = build_stable_datum(*oracle_for(m), true);
    const auto r = verify_pack(d, m, rev);
    o.require(r.passed, "A" + std::to_string(n) + ": " + r.first_divergence);
    const Field& f = d.field();
    const std::size_t k = d.point_count();
    for (PointIndex x = 0; x < k; ++x) {
      CategoryDatum e = d;
      Vector id = e.identity(x);
      id[0] = f.add(id[0], f.one());
      e.set_identity(x, id);
      ++mutations;
      o.require(!verify_pack(e, m, rev).passed, "identity edit undetected in A" + std::to_string(n));
    }
    for (PointIndex x = 0; x < k; ++x)
      for (PointIndex y = 0; y < k; ++y)
        for (PointIndex z = 0; z < k; ++z)
          for (std::size_t j = 0; j < d.hom_dim(y, z); ++j)
            for (std::size_t i = 0; i < d.hom_dim(x, y); ++i)
              for (std::size_t c = 0; c < d.hom_dim(x, z); ++c) {
                CategoryDatum e = d;
                Vector r2 = e.compose_basis(x, y, z, j, i);
                r2[c] = f.add(r2[c], f.one());
                e.set_compose(x, y, z, j, i, r2);
                ++mutations;
                o.require(!verify_pack(e, m, rev).passed, "compose edit undetected in A" + std::to_string(n));
              }
  }
  const auto lt = io::load_tower(kPacks / "ainf-tower");
  const PackManifest tm = io::load_manifest(lt.manifest);
  const StableBuild trev = build_stable_datum(*oracle_for(tm), true);
  for (std::size_t lv = 1; lv <= lt.tower.height(); ++lv) {
    const auto r = verify_pack(lt.tower.level(lv), tm, trev);
    o.require(r.passed, "tower level " + std::to_string(lv) + ": " + r.first_divergence);
  }
  // Sampled edits on a tower level.
  const CategoryDatum& d3 = lt.tower.level(3);
  std::mt19937_64 rng(kSeed);
  std::size_t tower_mutations = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = d3.point_count();
    const PointIndex x = rng() % k, y = rng() % k, z = rng() % k;
    if (!d3.hom_dim(x, y) || !d3.hom_dim(y, z) || !d3.hom_dim(x, z)) continue;
    const std::size_t j = rng() % d3.hom_dim(y, z), i = rng() % d3.hom_dim(x, y), c = rng() % d3.hom_dim(x, z);
    CategoryDatum e = d3;
    Vector r2 = e.compose_basis(x, y, z, j, i);
    r2[c] = e.field().add(r2[c], e.field().one());
    e.set_compose(x, y, z, j, i, r2);
    ++tower_mutations;
    o.require(!verify_pack(e, tm, trev).passed, "tower edit undetected");
  }
  if (o.passed)
    o.detail << "A1..A5 and 8 tower levels certified; " << mutations << " + " << tower_mutations
             << " single-coefficient edits detected";
}

// Criterion 11: exclusion witnesses for every nonzero stable hom pair.
void witnesses(Outcome& o, const std::vector<CategoryDatum>& data) {
  std::size_t pairs = 0;
  for (const auto& d : data)
    for (PointIndex x = 0; x < d.point_count(); ++x)
      for (PointIndex y = 0; y < d.point_count(); ++y) {
        if (x == y || d.hom_dim(x, y) == 0) continue;
        ++pairs;
        PointSet s = d.empty_set();
        s.set(x);
        const auto w = exclusion_witness(d, y, s);
        const std::string pair = d.point(x).id + " -> " + d.point(y).id;
        o.require(w.has_value(), "no witness for " + pair);
        if (!w) continue;
        const FpFunctor f{*w};
        o.require(eval_dim(d, f, x) == 0 && eval_dim(d, f, y) != 0, "cokernel does not separate " + pair);
      }
  if (o.passed) o.detail << pairs << " ordered pairs across A1..A5 and 8 tower levels";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<CategoryDatum> data;
  TruncationTower tower;
  double gen_seconds = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    data = all_data();
    tower = gen_ainf_tower(8, 24).tower;
    gen_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    std::cout << "FAIL setup: " << e.what() << "\n";
    return 1;
  }

  const std::vector<Criterion> criteria = {
      {1, "Kuratowski axioms on A1-A5", kuratowski},
      {2, "T1 on every datum-backed space", [&](Outcome& o) { t1(o, data); }},
      {3, "finite discreteness and CB rank 0", discreteness},
      {4, "closure route cross-validation", routes},
      {5, "nonvanishing stable homs into I_n", [&](Outcome& o) { nonvanishing(o, tower, gen_seconds); }},
      {6, "CB rank bound on the countable tower and DVR", [&](Outcome& o) { cb_bound(o, tower); }},
      {7, "AR stabilization dichotomy", [&](Outcome& o) { ar_dichotomy(o, tower); }},
      {8, "sigma equals right perp", perp},
      {9, "closed subsets and Serre classes", serre},
      {10, "oracle certification and mutation detection", certification},
      {11, "exclusion witnesses separate pairs", [&](Outcome& o) { witnesses(o, data); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.passed) ++failures;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail.str()
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
