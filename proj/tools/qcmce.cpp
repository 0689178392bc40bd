#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcmce/attack_qcbch.hpp"
#include "qcmce/attack_qcldpc.hpp"
#include "qcmce/bch.hpp"
#include "qcmce/error.hpp"
#include "qcmce/isd.hpp"
#include "qcmce/probabilities.hpp"
#include "qcmce/qcbch.hpp"
#include "qcmce/qcldpc.hpp"
#include "qcmce/rng.hpp"
#include "report.hpp"

using namespace qcmce;
using cli::Report;
using cli::rounded;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2 };

// Bad input files or flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::string format = "text";
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

Report support_json(const RingPoly& v) {
  Report a = Report::array();
  for (auto e : v.support()) a.push_back(e);
  return a;
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> out;
  for (auto v : perm) out.push_back(v + 1);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Report qcbch_params_json(const QcBchParams& p) {
  return {{"m", p.m}, {"t", p.t}, {"p", p.p}, {"n0", p.n0}, {"k0", p.k0}};
}

Report qcldpc_params_json(const QcLdpcParams& p) {
  return {{"p", p.p}, {"n0", p.n0}, {"dv", p.dv}, {"m", p.q_weight}, {"t", p.t}, {"tprime", p.t_prime}};
}

// ---------------------------------------------------------------- qcbch

struct QcBchOpts {
  std::string preset = "desk";
  std::optional<unsigned> m;
  std::optional<std::size_t> t, p, n0, k0;
  std::string prim;
  std::string key = "qcbch.key";
  bool public_only = false;
};

QcBchParams resolve(const QcBchOpts& o) {
  QcBchParams pr = QcBchParams::preset(o.preset);
  if (o.m) pr.m = *o.m;
  if (o.t) pr.t = *o.t;
  if (o.p) pr.p = *o.p;
  if (o.n0) pr.n0 = *o.n0;
  if (o.k0) pr.k0 = *o.k0;
  return pr;
}

int run_keygen_qcbch(const QcBchOpts& o, const Global& g, Report& rep) {
  const QcBchParams pr = resolve(o);
  pr.validate();
  const std::uint32_t prim = o.prim.empty() ? enumerate_primitive_polys(pr.m).front() : parse_hex(o.prim);
  const auto key = keygen_qcbch(pr, prim, g.seed);
  QcBchKeyFile file{pr, prim, o.public_only ? std::vector<std::size_t>{} : key.perm, key.public_gen};
  auto out = open_out(o.key);
  write_qcbch_key(out, file);
  rep["command"] = "keygen-qcbch";
  rep["params"] = qcbch_params_json(pr);
  rep["prim_poly"] = format_hex(prim);
  rep["seed"] = g.seed;
  rep["bch_dimension"] = key.code.dim;
  rep["subcode_dimension"] = key.dimension;
  rep["redraws"] = key.redraws;
  rep["perm"] = one_based(key.perm);
  rep["key_file"] = o.key;
  return kOk;
}

int run_attack_qcbch(const QcBchOpts& o, const Global& g, Report& rep) {
  auto in = open_in(o.key);
  const auto file = read_qcbch_key(in);
  QcBchParams pr = file.params;
  if (o.m) pr.m = *o.m;
  const auto res = qcmce::run_attack_qcbch(file.public_gen, pr, g.workers);
  rep["command"] = "attack-qcbch";
  rep["params"] = qcbch_params_json(pr);
  rep["candidates_total"] = res.candidates_total;
  Report cands = Report::array();
  for (const auto& c : res.candidates) {
    cands.push_back({{"prim_poly", format_hex(c.prim_poly)},
                     {"equations", c.equations_used},
                     {"rank", c.rank},
                     {"nullspace_dim", c.nullspace_dim},
                     {"verified", c.verified}});
  }
  rep["candidates"] = cands;
  rep["success"] = res.success;
  if (!res.success) {
    rep["failure"] = res.failure;
    return kFailed;
  }
  rep["prim_poly"] = format_hex(res.prim_poly);
  rep["perm"] = one_based(res.perm);
  if (!file.perm.empty()) rep["matches_key_file"] = res.perm == file.perm;
  return kOk;
}

// ---------------------------------------------------------------- qcldpc

struct QcLdpcOpts {
  std::string preset = "desk";
  std::optional<std::size_t> p, n0, dv, m, t, tprime;
  std::string key = "qcldpc.key";
  std::string pub = "qcldpc.pub";
};

QcLdpcParams resolve(const QcLdpcOpts& o) {
  QcLdpcParams pr = QcLdpcParams::preset(o.preset);
  if (o.p) pr.p = *o.p;
  if (o.n0) pr.n0 = *o.n0;
  if (o.dv) pr.dv = *o.dv;
  if (o.m) pr.q_weight = *o.m;
  if (o.t) pr.t = *o.t;
  if (o.tprime) pr.t_prime = *o.tprime;
  return pr;
}

int run_keygen_qcldpc(const QcLdpcOpts& o, const Global& g, Report& rep) {
  const QcLdpcParams pr = resolve(o);
  const auto key = keygen_qcldpc(pr, g.seed);
  {
    auto out = open_out(o.key);
    write_qcldpc_key(out, pr, key.secret);
  }
  {
    auto out = open_out(o.pub);
    write_qcldpc_public(out, pr, key.public_g);
  }
  rep["command"] = "keygen-qcldpc";
  rep["params"] = qcldpc_params_json(pr);
  rep["seed"] = g.seed;
  rep["redraws"] = {{"h", key.h_redraws}, {"s", key.s_redraws}, {"q", key.q_redraws}};
  rep["key_file"] = o.key;
  rep["public_file"] = o.pub;
  return kOk;
}

struct CryptOpts {
  std::string message;
  std::string ciphertext = "qcldpc.ct";
  std::string output;
  std::optional<std::size_t> tprime;
  std::string rule = "max-count";
  std::size_t max_iter = 50;
  std::size_t restarts = 50;
};

int run_encrypt(const QcLdpcOpts& o, const CryptOpts& c, const Global& g, Report& rep) {
  auto in = open_in(o.pub);
  const auto pub = read_qcldpc_public(in);
  BlockVec x;
  std::string msg_path = c.message;
  if (!msg_path.empty() && std::filesystem::exists(msg_path)) {
    auto min = open_in(msg_path);
    x = read_block_vec(min, "message");
    if (x.size() != pub.params.n0 - 1) throw UsageError("message has the wrong number of blocks");
  } else {
    Rng rng(g.seed, "cli.message");
    for (std::size_t i = 0; i + 1 < pub.params.n0; ++i) {
      RingPoly v(pub.params.p);
      for (std::size_t a = 0; a < pub.params.p; ++a) v.set(a, rng.coin());
      x.push_back(std::move(v));
    }
    if (msg_path.empty()) msg_path = "qcldpc.msg";
    auto mout = open_out(msg_path);
    write_block_vec(mout, "message", x);
  }
  const std::size_t tp = c.tprime.value_or(pub.params.t_prime);
  const auto ct = encrypt_qcldpc(pub.public_g, x, tp, g.seed);
  auto out = open_out(c.ciphertext);
  write_block_vec(out, "ciphertext", ct);
  rep["command"] = "encrypt";
  rep["params"] = qcldpc_params_json(pub.params);
  rep["seed"] = g.seed;
  rep["error_weight"] = tp;
  rep["message_file"] = msg_path;
  rep["ciphertext_file"] = c.ciphertext;
  return kOk;
}

int run_decrypt(const QcLdpcOpts& o, const CryptOpts& c, Report& rep) {
  auto kin = open_in(o.key);
  const auto key = read_qcldpc_key(kin);
  auto cin = open_in(c.ciphertext);
  const auto ct = read_block_vec(cin, "ciphertext");
  if (ct.size() != key.params.n0) throw UsageError("ciphertext has the wrong number of blocks");
  DecodeOptions opts;
  if (c.rule == "majority") {
    opts.rule = FlipRule::majority;
  } else if (c.rule == "max-count") {
    opts.rule = FlipRule::max_count;
  } else {
    throw UsageError("--rule must be majority or max-count");
  }
  opts.max_iter = c.max_iter;
  opts.restarts = c.restarts;
  rep["command"] = "decrypt";
  rep["params"] = qcldpc_params_json(key.params);
  try {
    const auto x = decrypt_qcldpc(key.secret, ct, opts);
    const std::string path = c.output.empty() ? "qcldpc.dec" : c.output;
    auto out = open_out(path);
    write_block_vec(out, "message", x);
    rep["decoded"] = true;
    rep["message_file"] = path;
    if (!c.message.empty() && std::filesystem::exists(c.message)) {
      auto min = open_in(c.message);
      rep["matches_message"] = read_block_vec(min, "message") == x;
    }
    return kOk;
  } catch (const DecodeFailure& e) {
    rep["decoded"] = false;
    rep["iterations"] = e.iterations();
    return kFailed;
  }
}

struct LdpcAttackOpts {
  int strategy = 2;
  std::size_t g = 2;
  std::size_t ell = 10;
  std::size_t max_iterations = 20000;
  std::string output = "qcldpc.recovered.key";
  std::string compare;
};

int run_attack_qcldpc(const QcLdpcOpts& o, const LdpcAttackOpts& a, const Global& g, Report& rep) {
  auto in = open_in(o.pub);
  const auto pub = read_qcldpc_public(in);
  QcLdpcAttackOptions opts;
  opts.strategy = a.strategy;
  opts.row_stern = opts.extract_stern = SternParams{a.g, a.ell, a.max_iterations};
  opts.seed = g.seed;
  opts.workers = g.workers;
  rep["command"] = "attack-qcldpc";
  rep["params"] = qcldpc_params_json(pub.params);
  rep["strategy"] = a.strategy;
  rep["seed"] = g.seed;
  try {
    const auto res = attack_qcldpc(pub.public_g, pub.params, opts);
    rep["prefix_max_weight"] = res.prefix_max_weight;
    Report rows = Report::array();
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      rows.push_back({{"row", i + 1},
                      {"strategy", a.strategy},
                      {"candidates", res.rows[i].candidates_tested},
                      {"stern_iterations", res.rows[i].stern_iterations}});
    }
    rep["rows"] = rows;
    rep["extraction"] = {{"pivot", res.extraction.pivot + 1},
                         {"stern_runs", res.extraction.stern_runs},
                         {"stern_iterations", res.extraction.stern_iterations},
                         {"factor_candidates", res.extraction.factor_candidates}};
    rep["verified"] = res.verified;
    std::ostringstream key;
    write_qcldpc_key(key, pub.params, res.extraction.secret);
    {
      auto out = open_out(a.output);
      out << key.str();
    }
    rep["recovered_file"] = a.output;
    rep["recovered_key"] = lines_of(key.str());
    if (!a.compare.empty()) {
      auto kin = open_in(a.compare);
      const auto planted = read_qcldpc_key(kin);
      rep["same_code_as_key_file"] = same_code_up_to_shift(res.extraction.secret.h, planted.secret.h);
    }
    return kOk;
  } catch (const PartialResult& e) {
    rep["verified"] = false;
    rep["failed_stage"] = e.stage();
    rep["failure"] = e.what();
    return kFailed;
  } catch (const AttackFailed& e) {
    rep["verified"] = false;
    rep["failure"] = e.what();
    return kFailed;
  }
}

// ---------------------------------------------------------------- numerics

struct WfOpts {
  std::size_t n = 12096, k = 4032, w = 21, g = 3, ell = 43;
  double aw = 4032;
  bool optimize = false;
  std::size_t g_max = 8, ell_max = 200;
};

int run_workfactor(const WfOpts& o, Report& rep) {
  SternParams sp{o.g, o.ell, 0};
  WorkFactor wf;
  if (o.optimize) {
    const auto best = optimize_stern(o.n, o.k, o.w, o.aw, o.g_max, o.ell_max);
    sp = best.params;
    wf = best.work;
  } else {
    wf = stern_workfactor(o.n, o.k, o.w, sp, o.aw);
  }
  rep["command"] = "workfactor";
  rep["optimized"] = o.optimize;
  rep["table"] = Report::array({{
      {"n", o.n},
      {"k", o.k},
      {"w", o.w},
      {"g", sp.g},
      {"ell", sp.ell},
      {"A_w", rounded(o.aw)},
      {"log2_N", rounded(wf.log2_iteration_cost)},
      {"log2_P_w", rounded(wf.log2_success_prob)},
      {"log2_Omega", rounded(wf.log2_total)},
  }});
  return kOk;
}

struct ProbOpts {
  std::size_t p = 4032, m = 7, trials = 10000;
};

int run_probabilities(const ProbOpts& o, const Global& g, Report& rep) {
  const auto st = simulate_products(o.p, o.m, o.trials, g.seed);
  auto row = [](const char* name, double bound, const Frequency& f, bool upper) {
    const double margin = upper ? bound + 3 * f.sigma() : bound - 3 * f.sigma();
    return Report{{"event", name},
                  {"bound", rounded(bound)},
                  {"kind", upper ? "upper" : "lower"},
                  {"frequency", rounded(f.value())},
                  {"sigma", rounded(f.sigma())},
                  {"within_3_sigma", upper ? f.value() <= margin : f.value() >= margin}};
  };
  rep["command"] = "probabilities";
  rep["p"] = o.p;
  rep["m"] = o.m;
  rep["trials"] = o.trials;
  rep["seed"] = g.seed;
  rep["table"] = Report::array({
      row("collision", collision_bound(o.p, o.m, 1), st.collision, true),
      row("containment", containment_bound(o.p, o.m), st.containment, false),
      row("full_weight", full_weight_bound(o.p, o.m), st.full_weight, false),
  });
  bool ok = true;
  for (const auto& r : rep["table"]) ok = ok && r["within_3_sigma"].get<bool>();
  return ok ? kOk : kFailed;
}

int run_fixture_check(const std::string& path, Report& rep) {
  auto in = open_in(path);
  const auto key = read_qcldpc_key(in);
  const auto res = check_product_identity(key.params, key.secret);
  const std::size_t r = key.params.n0 - 1;
  Report blocks = Report::array();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      blocks.push_back({{"i", i + 1},
                        {"j", j + 1},
                        {"weight_s", key.secret.s.at(i, j).weight()},
                        {"weight_g", res.weights[i * r + j]},
                        {"identity", static_cast<bool>(res.holds[i * r + j])}});
    }
  }
  const bool weight_ok = res.max_weight <= key.params.q_weight * key.params.q_weight;
  rep["command"] = "fixture-check";
  rep["params"] = qcldpc_params_json(key.params);
  rep["blocks"] = blocks;
  rep["max_weight"] = res.max_weight;
  rep["weight_bound"] = key.params.q_weight * key.params.q_weight;
  rep["pattern_ok"] = res.pattern_ok;
  rep["all_identities_hold"] = res.all_hold();
  return res.all_hold() && weight_ok && res.pattern_ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-cyclic McEliece variants and their structural attacks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--workers", g.workers, "Worker threads")->envname("QCMCE_WORKERS")->check(CLI::PositiveNumber);

  QcBchOpts bch;
  auto add_bch = [&](CLI::App* sub, bool params) {
    sub->add_option("--key", bch.key, "Key file");
    if (params) {
      sub->add_option("--preset", bch.preset, "paper-a, paper-b or desk");
      sub->add_option("--t", bch.t);
      sub->add_option("--p", bch.p);
      sub->add_option("--n0", bch.n0);
      sub->add_option("--k0", bch.k0);
      sub->add_option("--prim", bch.prim, "Primitive polynomial (hex); default the smallest");
      sub->add_flag("--public-only", bch.public_only, "Omit the permutation from the key file");
    }
    sub->add_option("--m", bch.m, params ? "Field degree" : "Attack assuming this field degree");
  };
  auto* keygen_bch = app.add_subcommand("keygen-qcbch", "Generate a QC-BCH subcode key");
  add_bch(keygen_bch, true);
  auto* attack_bch = app.add_subcommand("attack-qcbch", "Recover the secret block permutation");
  add_bch(attack_bch, false);

  QcLdpcOpts ldpc;
  auto add_ldpc_files = [&](CLI::App* sub) {
    sub->add_option("--key", ldpc.key, "Secret key file");
    sub->add_option("--pub", ldpc.pub, "Public key file");
  };
  auto* keygen_ldpc = app.add_subcommand("keygen-qcldpc", "Generate a QC-LDPC key pair");
  add_ldpc_files(keygen_ldpc);
  keygen_ldpc->add_option("--preset", ldpc.preset, "paper-ldpc or desk");
  keygen_ldpc->add_option("--p", ldpc.p);
  keygen_ldpc->add_option("--n0", ldpc.n0);
  keygen_ldpc->add_option("--dv", ldpc.dv);
  keygen_ldpc->add_option("--m", ldpc.m, "Weight of the q_i");
  keygen_ldpc->add_option("--t", ldpc.t);
  keygen_ldpc->add_option("--tprime", ldpc.tprime);

  CryptOpts crypt;
  auto* enc = app.add_subcommand("encrypt", "Encrypt a message under a QC-LDPC public key");
  add_ldpc_files(enc);
  enc->add_option("--message", crypt.message, "Message file; a random message is written if absent");
  enc->add_option("--out", crypt.ciphertext, "Ciphertext file");
  enc->add_option("--tprime", crypt.tprime, "Error weight (default from the key)");
  auto* dec = app.add_subcommand("decrypt", "Decrypt with a QC-LDPC secret key");
  add_ldpc_files(dec);
  dec->add_option("--in", crypt.ciphertext, "Ciphertext file");
  dec->add_option("--out", crypt.output, "Decrypted message file (default qcldpc.dec)");
  dec->add_option("--message", crypt.message, "Compare with this message file");
  dec->add_option("--rule", crypt.rule, "majority or max-count");
  dec->add_option("--max-iter", crypt.max_iter, "Rounds per decoding attempt");
  dec->add_option("--restarts", crypt.restarts, "Randomized restarts after a failed attempt");

  LdpcAttackOpts lat;
  auto* attack_ldpc = app.add_subcommand("attack-qcldpc", "Recover a QC-LDPC secret key from the public key");
  attack_ldpc->add_option("--pub", ldpc.pub, "Public key file");
  attack_ldpc->add_option("--strategy", lat.strategy, "Row factorization strategy")->check(CLI::Range(1, 2));
  attack_ldpc->add_option("--g", lat.g, "Stern: rows per half");
  attack_ldpc->add_option("--ell", lat.ell, "Stern: window length");
  attack_ldpc->add_option("--max-iterations", lat.max_iterations, "Stern: iteration budget per search");
  attack_ldpc->add_option("--out", lat.output, "Recovered key file");
  attack_ldpc->add_option("--compare", lat.compare, "Secret key file to compare the recovered code with");

  WfOpts wf;
  auto* work = app.add_subcommand("workfactor", "Stern work factor");
  work->add_option("--n", wf.n);
  work->add_option("--k", wf.k);
  work->add_option("--w", wf.w);
  work->add_option("--g", wf.g);
  work->add_option("--ell", wf.ell);
  work->add_option("--aw", wf.aw, "Number of target codewords");
  work->add_flag("--optimize", wf.optimize, "Minimise over g and ell");
  work->add_option("--g-max", wf.g_max);
  work->add_option("--ell-max", wf.ell_max);

  ProbOpts prob;
  auto* probs = app.add_subcommand("probabilities", "Monte Carlo check of the product-support bounds");
  probs->add_option("--p", prob.p);
  probs->add_option("--m", prob.m);
  probs->add_option("--trials", prob.trials);

  std::string fixture;
  auto* fx = app.add_subcommand("fixture-check", "Check the product identity on a full QC-LDPC key file");
  fx->add_option("--key", fixture, "Key file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Report rep;
  int code = kOk;
  try {
    if (*keygen_bch) code = run_keygen_qcbch(bch, g, rep);
    else if (*attack_bch) code = run_attack_qcbch(bch, g, rep);
    else if (*keygen_ldpc) code = run_keygen_qcldpc(ldpc, g, rep);
    else if (*enc) code = run_encrypt(ldpc, crypt, g, rep);
    else if (*dec) code = run_decrypt(ldpc, crypt, rep);
    else if (*attack_ldpc) code = run_attack_qcldpc(ldpc, lat, g, rep);
    else if (*work) code = run_workfactor(wf, rep);
    else if (*probs) code = run_probabilities(prob, g, rep);
    else if (*fx) code = run_fixture_check(fixture, rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateParameters& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleParameters& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OutOfRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  cli::emit(std::cout, rep, g.format == "json");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "elapsed %.3f s\n", secs);
  return code;
}
