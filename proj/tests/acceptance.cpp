// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "session_support.hpp"
#include "sigloop/error.hpp"
#include "sigloop/json_io.hpp"
#include "sigloop/minhash.hpp"
#include "sigloop/rule_miner.hpp"
#include "sigloop/session_service.hpp"
#include "support.hpp"

using namespace sigloop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome iris_reproduction(const std::string& cli) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Json rows;
  if (!cli.empty()) {
    const auto report = fs::temp_directory_path() / ("sigloop-acceptance-iris-" + std::to_string(::getpid()) + ".json");
    const std::string cmd = "\"" + cli + "\" run --dataset iris --iterations 15 --ratio 4:1 --runs 10 --report \"" +
                            report.string() + "\" > /dev/null";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "cli exit status " + std::to_string(rc));
    std::ifstream in(report);
    if (!in) {
      o.require(false, "no report written");
      return o;
    }
    rows = Json::parse(in)["iterations"];
    fs::remove(report);
  } else {
    ExperimentConfig ec;
    ec.iterations = 15;
    ec.runs = 10;
    rows = report_to_json(run_experiment(*builtin_dataset("iris"), ec))["iterations"];
  }
  const double elapsed = seconds_since(t0);
  if (rows.size() != 16) {
    o.require(false, "expected 16 rows");
    return o;
  }
  const double a9 = rows[9]["mean_accuracy"], a15 = rows[15]["mean_accuracy"];
  const std::size_t l9 = rows[9]["labels_used"];
  o.require(a9 >= 0.90, "accuracy@9 >= 0.90");
  o.require(a15 >= a9, "accuracy@15 >= accuracy@9");
  o.require(l9 == 45, "labels_used@9 == 45");
  o.require(elapsed < 30.0, "runtime < 30 s");
  o.detail << "acc@0=" << fmt(rows[0]["mean_accuracy"]) << " acc@9=" << fmt(a9) << " sigma@9=" << fmt(rows[9]["sigma"])
           << " acc@15=" << fmt(a15) << " labels@9=" << l9 << " time=" << fmt(elapsed, 2) << "s";
  return o;
}

// ---------------------------------------------------------------------------

struct PermutationHasher {
  std::vector<std::vector<FeatureIndex>> perms;
  std::uint64_t operator()(std::size_t i, const SymbolInstance& s) const {
    const auto& p = perms[i];
    return static_cast<std::uint64_t>(std::find(p.begin(), p.end(), s.feature) - p.begin()) + 1;
  }
};

Signature set_sig(const std::string& id, std::initializer_list<FeatureIndex> f) {
  Signature s(id);
  for (auto x : f) s.set_count(x, 1);
  return s;
}

std::multiset<std::string> expanded(const Signature& s, const Vocabulary& v) {
  std::multiset<std::string> out;
  s.for_each_instance([&](FeatureIndex f, SymbolCount k) { out.insert(v.key(f) + "#" + std::to_string(k)); });
  return out;
}

MiningRule rule_of(std::vector<FeatureId> f, RuleMode mode) {
  std::sort(f.begin(), f.end());
  return {std::move(f), 1.0, 1.0, mode};
}

Outcome golden_examples() {
  Outcome o;
  enum : FeatureIndex { A, B, C, D, E, F };

  {
    const Vocabulary vocab(6);
    const HashFamily family(1, 4, 1);
    const PermutationHasher h{{{F, B, A, E, D, C}, {A, C, B, D, E, F}, {B, D, A, C, E, F}, {F, E, A, B, C, D}}};
    const auto ka = sketch_signature_with(set_sig("A", {A, B, F}), vocab, family, h);
    const auto kb = sketch_signature_with(set_sig("B", {A, D, F}), vocab, family, h);
    const auto kc = sketch_signature_with(set_sig("C", {B, C, E}), vocab, family, h);
    const double ab = estimate_similarity(ka, kb), ac = estimate_similarity(ka, kc);
    o.require(ab == 0.75 && ac == 0.25, "min-hash estimates 0.75 / 0.25");
    o.detail << "minhash=" << ab << "/" << ac << " ";
  }

  const DatasetItem it1{"t1", {3, 0, 1}, {}, {}};
  const DatasetItem it2{"t2", {1, 3, 2}, {}, {}};
  const auto t1 = symbolize(it1, std::nullopt);
  const auto t2 = symbolize(it2, std::nullopt);
  {
    Vocabulary v(3);
    const bool ok = expanded(t1, v) == std::multiset<std::string>{"b0#1", "b0#2", "b0#3", "b2#1"};
    o.require(ok, "symbolization {3,0,1}");
    o.detail << "symbolize=" << (ok ? "ok" : "bad") << " ";
  }

  {
    TransactionDatabase db;
    for (const Itemset& t : std::vector<Itemset>{{A, B, C}, {A, B, C, E}, {A, B, E}, {A, C}, {A, B, C, D, E}})
      db.transactions.push_back({t, TransactionLabel::none});
    const double sup = support({A, B, C}, db);
    const double conf = confidence({A, B}, {C}, db);
    o.require(std::abs(sup - 0.6) < 1e-12, "support 0.6");
    o.require(std::abs(conf - 0.5) < 1e-12, "confidence 0.5");
    o.detail << "support=" << fmt(sup, 3) << " confidence=" << fmt(conf, 3) << " ";
  }

  {
    Vocabulary v(3);
    const auto add_a = apply_pull(rule_of({FeatureId::base(A)}, RuleMode::pull), t1, v);
    const bool c1 = expanded(add_a, v) == std::multiset<std::string>{"b0#1", "b0#2", "b0#3", "b0#4", "b2#1"};
    const auto skip = apply_pull(rule_of({FeatureId::base(A), FeatureId::base(B)}, RuleMode::pull), t1, v);
    const bool c2 = skip == t1 && v.size() == 3;
    const auto add_ab = apply_pull(rule_of({FeatureId::base(A), FeatureId::base(B)}, RuleMode::pull), t2, v, 1);
    const bool c3 = expanded(add_ab, v) == std::multiset<std::string>{"b0#1", "b1#1", "b1#2", "b1#3", "b2#1", "b2#2", "c:0+1#1"};
    o.require(c1 && c2 && c3, "pull cases");
    const auto rem1 = apply_push(rule_of({FeatureId::base(A)}, RuleMode::push), t1, v);
    const auto rem2 = apply_push(rule_of({FeatureId::base(A)}, RuleMode::push), t2, v);
    const bool p1 = expanded(rem1, v) == std::multiset<std::string>{"b0#1", "b0#2", "b2#1"};
    const bool p2 = expanded(rem2, v) == std::multiset<std::string>{"b1#1", "b1#2", "b1#3", "b2#1", "b2#2"};
    o.require(p1 && p2, "push cases");
    o.detail << "pull=" << c1 << c2 << c3 << " push=" << p1 << p2;
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome estimator_statistics() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(2024);
  const std::size_t dim = 24;
  const Vocabulary vocab(dim);
  const HashFamily one(11, 256, 1), two(11, 256, 2);
  std::size_t within = 0, pairs = 0, within2 = 0;
  double matches = 0.0, expected = 0.0, variance = 0.0;
  while (pairs < 1000) {
    const auto a = oracle::random_signature(rng, "a", dim, 6, 0.5);
    // b is a mutation of a so that similarities spread over [0, 1]
    Signature b("b");
    const double keep = rng.uniform();
    for (const auto& [f, c] : a.counts())
      if (rng.coin(keep)) b.set_count(f, c);
    for (std::size_t d = 0; d < dim; ++d)
      if (rng.coin(0.5 * (1 - keep))) b.set_count(static_cast<FeatureIndex>(d), 1 + static_cast<SymbolCount>(rng.below(6)));
    if (a.empty() || b.empty()) continue;
    ++pairs;
    const double s = exact_jaccard(a, b);
    const double est = estimate_similarity(sketch_signature(a, vocab, one), sketch_signature(b, vocab, one));
    within += std::abs(est - s) <= 3.0 * std::sqrt(s * (1 - s) / 256.0) + 1e-12;

    const double rate = estimate_similarity(sketch_signature(a, vocab, two), sketch_signature(b, vocab, two));
    const double p = s * s;
    within2 += std::abs(rate - p) <= 3.0 * std::sqrt(p * (1 - p) / 128.0) + 1e-12;
    matches += rate * 128.0;
    expected += p * 128.0;
    variance += 128.0 * p * (1 - p);
  }
  const double elapsed = seconds_since(t0);
  const double frac = static_cast<double>(within) / pairs;
  const double frac2 = static_cast<double>(within2) / pairs;
  const double z = (matches - expected) / std::sqrt(variance);
  o.require(frac >= 0.99, ">= 99% of n=1 estimates within 3 sigma");
  o.require(frac2 >= 0.99, ">= 99% of n=2 match rates within 3 sigma of s^2");
  o.require(std::abs(z) <= 3.0, "pooled n=2 match count within 3 sigma");
  o.require(elapsed < 10.0, "runtime < 10 s");
  o.detail << "n1_within=" << fmt(frac, 3) << " n2_within=" << fmt(frac2, 3) << " n2_pooled_z=" << fmt(z, 2)
           << " time=" << fmt(elapsed, 2) << "s";
  return o;
}

// ---------------------------------------------------------------------------

Outcome miner_oracle() {
  Outcome o;
  oracle::Rng rng(77);
  std::size_t frequent_ok = 0, disc_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nv = 1 + rng.below(12);
    const std::size_t nt = 1 + rng.below(8);
    std::vector<Itemset> txs;
    for (std::size_t t = 0; t < nt; ++t) {
      Itemset s;
      const double density = 0.2 + 0.6 * rng.uniform();
      for (FeatureIndex f = 0; f < nv; ++f)
        if (rng.coin(density)) s.push_back(f);
      txs.push_back(s);
    }
    TransactionDatabase db;
    for (const auto& t : txs) db.transactions.push_back({t, TransactionLabel::none});
    const double minsup = (1.0 + static_cast<double>(rng.below(nt))) / static_cast<double>(nt);
    const std::size_t maxlen = 1 + rng.below(4);
    std::map<Itemset, double> got;
    for (const auto& f : mine_frequent(db, minsup, maxlen)) got[f.items] = f.support;
    const auto want = oracle::brute_frequent(txs, minsup, maxlen);
    bool same = got.size() == want.size();
    for (const auto& [s, sup] : want) same = same && got.count(s) && std::abs(got[s] - sup) < 1e-12;
    frequent_ok += same;

    // split the same transactions into positives and negatives
    const std::size_t npos = 1 + rng.below(nt);
    std::vector<Itemset> pos_tx(txs.begin(), txs.begin() + static_cast<std::ptrdiff_t>(npos));
    std::vector<Itemset> neg_tx(txs.begin() + static_cast<std::ptrdiff_t>(npos), txs.end());
    std::vector<Signature> pos, neg;
    for (std::size_t i = 0; i < pos_tx.size(); ++i) {
      Signature s("p" + std::to_string(i));
      for (auto f : pos_tx[i]) s.set_count(f, 1 + static_cast<SymbolCount>(i));
      pos.push_back(s);
    }
    for (std::size_t i = 0; i < neg_tx.size(); ++i) {
      Signature s("n" + std::to_string(i));
      for (auto f : neg_tx[i]) s.set_count(f, 1);
      neg.push_back(s);
    }
    const double dminsup = rng.coin() ? 1.0 : 0.5;
    std::set<Itemset> mined;
    for (const auto& r : mine_discriminative(pos, neg, Vocabulary(nv), dminsup, maxlen).rules)
      mined.insert(oracle::rule_columns(r));
    disc_ok += mined == oracle::brute_discriminative(pos_tx, neg_tx, dminsup, maxlen);
  }
  o.require(frequent_ok == 100, "mine_frequent equals enumeration");
  o.require(disc_ok == 100, "mine_discriminative equals enumeration");
  o.detail << "frequent=" << frequent_ok << "/100 discriminative=" << disc_ok << "/100";
  return o;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> positions(const SessionState& s, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(s.position_of(id));
  return out;
}

Outcome learning_direction() {
  Outcome o;
  oracle::Rng rng(99);
  std::size_t pulls = 0, pull_ok = 0, pushes = 0, push_ok = 0, empties = 0, empty_ok = 0;
  std::string first_bad;
  for (int session = 0; session < 50; ++session) {
    const auto data = oracle::random_dataset(rng, 24, 6, 3);
    auto state = initialize_session(data, oracle::integer_config(rng.next()));
    const auto truth = state.labels();
    for (int it = 0; it < 3; ++it) {
      Selection sel;
      if (it % 2 == 0) {
        sel = simulate_user(state, truth, {3, 1}, rng.next());
        sel.mode = RuleMode::pull;
      } else {
        const auto a = rng.below(state.item_count());
        auto b = rng.below(state.item_count() - 1);
        if (b >= a) ++b;
        sel = {{state.signatures[a].item_id(), state.signatures[b].item_id()}, {}, RuleMode::push};
      }
      const auto idx = positions(state, sel.positives);
      const double before = mean_pairwise_jaccard(state, idx);
      auto next = iterate(state, sel);
      const auto& rules = next.history.back().rules_applied;
      if (rules.empty()) {
        ++empties;
        empty_ok += next.signatures == state.signatures;
      } else if (sel.mode == RuleMode::pull) {
        ++pulls;
        const double after = mean_pairwise_jaccard(next, idx);
        if (after > before) ++pull_ok;
        else if (first_bad.empty()) first_bad = "pull " + fmt(before) + "->" + fmt(after);
      } else {
        ++pushes;
        const double after = mean_pairwise_jaccard(next, idx);
        if (after < before) ++push_ok;
        else if (first_bad.empty()) first_bad = "push " + fmt(before) + "->" + fmt(after);
      }
      state = std::move(next);
    }
  }
  o.require(pulls > 0 && pull_ok == pulls, "every non-empty pull raises positive Jaccard");
  o.require(pushes > 0 && push_ok == pushes, "every push with shared features lowers pair Jaccard");
  o.require(empty_ok == empties, "empty rule sets leave signatures unchanged");
  o.detail << "pull=" << pull_ok << "/" << pulls << " push=" << push_ok << "/" << pushes << " empty=" << empty_ok << "/"
           << empties;
  if (!first_bad.empty()) o.detail << " first_violation=" << first_bad;
  return o;
}

// ---------------------------------------------------------------------------

double naive_stress(const Eigen::MatrixXd& x, const Eigen::MatrixXd& t) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      const double r = (x.row(i) - x.row(j)).norm() - t(i, j);
      s += r * r;
    }
  return s;
}

Eigen::MatrixXd random_targets(oracle::Rng& rng, int n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) t(i, j) = t(j, i) = rng.uniform();
  return t;
}

Outcome mds_properties() {
  Outcome o;
  oracle::Rng rng(5);
  std::size_t monotone = 0, runs = 0;
  for (int r = 0; r < 50; ++r) {
    const auto t = random_targets(rng, 3 + static_cast<int>(rng.below(40)));
    const auto e = embed<double>(t, 1 + r % 2, rng.next());
    bool ok = true;
    for (std::size_t k = 1; k < e.stress_history.size(); ++k) ok = ok && e.stress_history[k] <= e.stress_history[k - 1];
    monotone += ok;
    ++runs;
  }
  double worst_pair = 0.0;
  Eigen::MatrixXd two(2, 2);
  two << 0, 1, 1, 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto e = embed<double>(two, 1 + static_cast<int>(seed % 2), seed);
    worst_pair = std::max(worst_pair, std::abs((e.coords.row(0) - e.coords.row(1)).norm() - 1.0));
  }
  double worst_grad = 0.0;
  for (int r = 0; r < 50; ++r) {
    const auto t = random_targets(rng, 5);
    const int dim = 1 + r % 2;
    Eigen::MatrixXd x(5, dim);
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < dim; ++k) x(i, k) = 2 * rng.uniform() - 1;
    const auto g = stress_gradient(x, t);
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < dim; ++k) {
        Eigen::MatrixXd xp = x, xm = x;
        xp(i, k) += 1e-6;
        xm(i, k) -= 1e-6;
        const double fd = (naive_stress(xp, t) - naive_stress(xm, t)) / 2e-6;
        worst_grad = std::max(worst_grad, std::abs(g(i, k) - fd) / std::max(1.0, std::abs(fd)));
      }
  }
  o.require(monotone == runs, "stress non-increasing");
  o.require(worst_pair <= 1e-3, "2-point optimum within 1e-3");
  o.require(worst_grad <= 1e-5, "gradient within 1e-5 relative");
  o.detail << "monotone=" << monotone << "/" << runs << " two_point_err=" << worst_pair << " grad_rel_err=" << worst_grad;
  return o;
}

// ---------------------------------------------------------------------------

Outcome synthetic_trend() {
  Outcome o;
  const auto data = *builtin_dataset("synthetic");
  std::set<std::string> classes;
  for (const auto& it : data.items) classes.insert(*it.label);
  ExperimentConfig ec;
  ec.iterations = 10;
  ec.runs = 10;
  ec.session = oracle::integer_config();
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_experiment(data, ec);
  const double p0 = r.rows.front().mean_purity, p10 = r.rows.back().mean_purity;
  o.require(data.items.size() == 300 && classes.size() == 3, "300 items, 3 classes");
  o.require(p10 >= p0, "purity@10 >= purity@0");
  o.require(p10 >= 0.85, "purity@10 >= 0.85");
  o.detail << "purity@0=" << fmt(p0) << " purity@10=" << fmt(p10) << " time=" << fmt(seconds_since(t0), 2) << "s";
  return o;
}

// ---------------------------------------------------------------------------

Outcome determinism_replay() {
  Outcome o;
  ServiceOptions opts;
  opts.data_dir = fs::temp_directory_path() / ("sigloop-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(opts.data_dir);
  SessionService svc(opts);
  oracle::Rng rng(3);

  struct Case {
    std::string name;
    std::function<SessionHandle()> create;
    std::size_t iterations;
  };
  const std::vector<Case> cases{
      {"iris", [&] { return svc.create_builtin_session("iris", {}); }, 4},
      {"synthetic", [&] { return svc.create_builtin_session("synthetic", oracle::integer_config(9)); }, 5},
      {"upload", [&] { return svc.create_session(oracle::random_dataset(rng, 30, 5, 3), oracle::integer_config(4)); }, 6},
      {"empty", [&] { return svc.create_builtin_session("iris", oracle::integer_config(2)); }, 0},
  };
  std::size_t exact = 0;
  for (const auto& c : cases) {
    const auto h = c.create();
    for (std::size_t it = 0; it < c.iterations; ++it) {
      const auto state = svc.snapshot(h.session_id);
      svc.post_iteration(h.session_id, simulate_user(*state, state->labels(), {4, 1}, 10 + it));
    }
    const auto path = svc.save_session(h.session_id);
    SessionService fresh(opts);
    const auto loaded = fresh.load_session(path);
    auto a = svc.get_state(h.session_id);
    auto b = fresh.get_state(loaded.session_id);
    a.erase("session_id");
    b.erase("session_id");
    const bool same_view = a.dump() == b.dump();
    const bool same_state = oracle::same_state(*svc.snapshot(h.session_id), *fresh.snapshot(loaded.session_id));
    if (same_view && same_state)
      ++exact;
    else
      o.detail << c.name << " differs; ";
  }
  fs::remove_all(opts.data_dir);
  o.require(exact == cases.size(), "replayed views identical");
  o.detail << "bit_exact=" << exact << "/" << cases.size();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"iris-reproduction", [&] { return iris_reproduction(cli); }},
      {"golden-examples", golden_examples},
      {"estimator-statistics", estimator_statistics},
      {"miner-oracle", miner_oracle},
      {"learning-direction", learning_direction},
      {"mds", mds_properties},
      {"synthetic-clustering", synthetic_trend},
      {"determinism-replay", determinism_replay},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
