#include "CLI11.hpp"
#include "json.hpp"

#include "dimq/augquot.hpp"
#include "dimq/fixtures.hpp"
#include "dimq/lie.hpp"
#include "dimq/magnus.hpp"
#include "dimq/nq.hpp"
#include "dimq/pc.hpp"
#include "dimq/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace dimq;
using nlohmann::ordered_json;

namespace {

// exit codes: 0 pass, 1 verification failure, 2 usage/input error,
// 3 budget exhaustion
enum ExitCode { EXIT_PASS = 0, EXIT_FAIL = 1, EXIT_USAGE = 2, EXIT_BUDGET = 3 };

struct RunConfig {
  double time_s = 600.0;
  unsigned memory_mb = 4096;
  unsigned max_gens = 4096;
  size_t max_rows = 2'000'000;
  size_t max_monomials = 200'000;
  unsigned threads = 1; // accepted for interface stability; runs are
                        // single-threaded and reports never mention it
  std::string out_path;
  std::string config_path;

  NqBudget nq_budget() const {
    NqBudget b;
    b.seconds = time_s;
    b.max_gens = max_gens;
    b.max_rows = max_rows;
    return b;
  }
  AugBudget aug_budget() const {
    AugBudget b;
    b.seconds = time_s;
    b.max_monomials = max_monomials;
    b.max_rows = max_rows;
    return b;
  }
};

ordered_json int_json(const Int &v) {
  if (v.fits_slong_p() && abs(v) < Int(1) << 53)
    return (long)v.get_si();
  return v.get_str();
}

ordered_json ints_json(const std::vector<Int> &v) {
  ordered_json a = ordered_json::array();
  for (const auto &x : v)
    a.push_back(int_json(x));
  return a;
}

ordered_json matrix_json(const IntMatrix &m) {
  ordered_json rows = ordered_json::array();
  for (unsigned r = 0; r < m.rows(); ++r)
    rows.push_back(ints_json(m.row(r)));
  return rows;
}

ordered_json header_json(const std::string &subcommand,
                         ordered_json params) {
  ordered_json h;
  h["tool"] = kToolName;
  h["version"] = kToolVersion;
  h["schema"] = kReportSchema;
  h["subcommand"] = subcommand;
  ordered_json fx = ordered_json::object();
  for (const auto &[name, hash] : fixture_hashes())
    fx[name] = hash;
  h["fixtures"] = fx;
  h["params"] = std::move(params);
  return h;
}

void load_config(RunConfig &cfg) {
  if (cfg.config_path.empty())
    return;
  std::ifstream in(cfg.config_path);
  if (!in)
    throw CLI::ValidationError("config", "cannot open " + cfg.config_path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      auto e = s.find_last_not_of(" \t\r");
      s.erase(e == std::string::npos ? 0 : e + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "time_s")
      cfg.time_s = std::stod(val);
    else if (key == "memory_mb")
      cfg.memory_mb = (unsigned)std::stoul(val);
    else if (key == "max_gens")
      cfg.max_gens = (unsigned)std::stoul(val);
    else if (key == "max_rows")
      cfg.max_rows = std::stoul(val);
    else if (key == "max_monomials")
      cfg.max_monomials = std::stoul(val);
    else
      throw CLI::ValidationError("config", "unknown key '" + key + "'");
  }
}

ordered_json budget_json(const RunConfig &cfg) {
  ordered_json b;
  b["time_s"] = cfg.time_s;
  b["memory_mb"] = cfg.memory_mb;
  b["max_gens"] = cfg.max_gens;
  b["max_rows"] = cfg.max_rows;
  b["max_monomials"] = cfg.max_monomials;
  return b;
}

int emit(const RunConfig &cfg, const ordered_json &report, int code) {
  std::string text = report.dump(1) + "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return EXIT_USAGE;
    }
    out << text;
  } else {
    std::cout << text;
  }
  return code;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// -------------------------------------------------------------- lie-check

ordered_json lie_report_json(const LieCheckReport &rep) {
  ordered_json j;
  j["basis_size"] = rep.basis_size;
  j["w_generators"] = rep.w_generator_names;
  ordered_json mat = ordered_json::array();
  for (const auto &row : rep.w_generators)
    mat.push_back(ints_json(row));
  j["w_generator_matrix"] = mat;
  j["w_coords"] = ints_json(rep.w_coords);
  j["hnf_of_W"] = matrix_json(rep.hnf_of_W);
  j["w_in_W"] = rep.w_in_W;
  j["3w_in_W"] = rep.three_w_in_W;
  j["certificate"] = ints_json(rep.certificate);
  j["certificate_ok"] = rep.certificate_ok;
  j["pass"] = rep.pass();
  return j;
}

int cmd_lie_check(const RunConfig &cfg) {
  LieCheckReport rep = weight3_check();
  ordered_json j = header_json("lie-check", ordered_json::object());
  j["report"] = lie_report_json(rep);
  return emit(cfg, j, rep.pass() ? EXIT_PASS : EXIT_FAIL);
}

// ----------------------------------------------------------------- replay

ordered_json replay_json(const ReplayReport &rep) {
  ordered_json j;
  j["expansion_check"] = rep.expansion_check;
  j["expansion_residual_terms"] = rep.expansion_residual_terms;
  ordered_json checks = ordered_json::object();
  for (const auto &[name, ok] : rep.binomial_checks)
    checks[name] = ok;
  j["binomial_checks"] = checks;
  ordered_json weights = ordered_json::object();
  for (const auto &[name, w] : rep.weight_checks)
    weights[name] = w;
  j["weight_checks"] = weights;
  ordered_json details = ordered_json::object();
  for (const auto &[name, msg] : rep.details)
    details[name] = msg;
  j["details"] = details;
  j["pass"] = rep.pass();
  return j;
}

int cmd_replay(const RunConfig &cfg) {
  ReplayReport rep = replay_section1();
  ordered_json j = header_json("replay", ordered_json::object());
  j["report"] = replay_json(rep);
  return emit(cfg, j, rep.pass() ? EXIT_PASS : EXIT_FAIL);
}

// ----------------------------------------------------------------- magnus

int cmd_magnus(const RunConfig &cfg, const std::string &word_text,
               unsigned cap, const std::string &gens_csv) {
  GroupPresentation scratch;
  std::stringstream ss(gens_csv);
  std::string name;
  while (std::getline(ss, name, ','))
    scratch.alphabet.push_back({(unsigned)scratch.alphabet.size(), name});
  WordExpr w = parse_word_expr(word_text, scratch);
  NcPoly p = magnus_embed_expr(w, cap);
  NcPoly pm1 = p;
  pm1.add_term({}, -1);

  ordered_json params;
  params["word"] = word_text;
  params["cap"] = cap;
  params["gens"] = gens_csv;
  ordered_json j = header_json("magnus", params);
  ordered_json r;
  r["term_count"] = p.term_count();
  auto low = lowest_degree(pm1);
  if (low) {
    r["lowest_degree_of_w_minus_1"] = low->degree;
    r["leading_component"] = low->component.str(&scratch.alphabet);
  } else {
    r["lowest_degree_of_w_minus_1"] = nullptr;
  }
  if (p.term_count() <= 200)
    r["series"] = p.str(&scratch.alphabet);
  j["report"] = r;
  return emit(cfg, j, EXIT_PASS);
}

// --------------------------------------------------------------------- nq

ordered_json nq_summary_json(const NilpotentQuotient &q) {
  ordered_json s;
  s["class_reached"] = q.cls;
  s["ngens"] = q.pc.ngens;
  ordered_json sizes = ordered_json::array();
  for (unsigned n : q.layer_sizes())
    sizes.push_back(n);
  s["layer_sizes"] = sizes;
  ordered_json layers = ordered_json::array();
  for (const auto &d : q.layer_divisors)
    layers.push_back(ints_json(d));
  s["layer_divisors"] = layers;
  s["budget_exceeded"] = q.budget_exceeded;
  return s;
}

ordered_json pc_json(const NilpotentQuotient &q,
                     const GroupPresentation &pres) {
  PcData data;
  data.pc = q.pc;
  for (unsigned l = 0; l < pres.ngens(); ++l)
    data.images[pres.alphabet[l].name] = q.images[l];
  return ordered_json::parse(export_pc(data));
}

int cmd_nq(const RunConfig &cfg, const std::string &pres_path, unsigned cls) {
  GroupPresentation pres = parse_presentation(slurp(pres_path));
  NilpotentQuotient q = nilpotent_quotient(pres, cls, cfg.nq_budget());
  ordered_json params;
  params["pres"] = pres_path;
  params["class"] = cls;
  params["budget"] = budget_json(cfg);
  ordered_json j = header_json("nq", params);
  j["summary"] = nq_summary_json(q);
  j["pc"] = pc_json(q, pres);
  return emit(cfg, j, q.budget_exceeded ? EXIT_BUDGET : EXIT_PASS);
}

// ------------------------------------------------------------------ delta

ordered_json delta_json(const DeltaReport &rep) {
  ordered_json r;
  r["n"] = rep.n;
  r["class_used"] = rep.class_used;
  r["completed"] = rep.completed;
  r["budget_exceeded"] = rep.budget_exceeded;
  if (!rep.budget_note.empty())
    r["budget_note"] = rep.budget_note;
  if (rep.completed) {
    r["in_delta"] = rep.in_delta;
    r["monomials"] = rep.monomials;
    ordered_json layers = ordered_json::array();
    for (const auto &d : rep.layers)
      layers.push_back(ints_json(d));
    r["layers"] = layers;
    if (rep.in_delta)
      r["certificate"] = ints_json(rep.certificate);
  }
  r["in_gamma"] = rep.in_gamma;
  return r;
}

int cmd_delta(const RunConfig &cfg, const std::string &pres_path,
              const std::string &word_arg, unsigned n) {
  GroupPresentation pres = parse_presentation(slurp(pres_path));
  std::string word_text = word_arg;
  if (std::ifstream probe(word_arg); probe.good())
    word_text = slurp(word_arg);
  WordExpr w = parse_word_expr(word_text, pres);

  DeltaReport rep = delta_report(pres, w, n, cfg.nq_budget(), cfg.aug_budget());
  ordered_json params;
  params["pres"] = pres_path;
  params["word"] = word_arg;
  params["n"] = n;
  params["budget"] = budget_json(cfg);
  ordered_json j = header_json("delta", params);
  j["report"] = delta_json(rep);
  return emit(cfg, j, rep.budget_exceeded ? EXIT_BUDGET : EXIT_PASS);
}

// ------------------------------------------------------------------ gamma

int cmd_gamma(const RunConfig &cfg, const std::string &pc_path,
              const std::string &word_arg, unsigned n) {
  PcData data = import_pc(slurp(pc_path));
  if (data.images.empty())
    throw std::runtime_error("pc file carries no generator images");
  GroupPresentation scratch;
  std::vector<PcElement> images;
  for (const auto &[name, el] : data.images) {
    scratch.alphabet.push_back({(unsigned)scratch.alphabet.size(), name});
    images.push_back(el);
  }
  std::string word_text = word_arg;
  if (std::ifstream probe(word_arg); probe.good())
    word_text = slurp(word_arg);
  WordExpr w = parse_word_expr(word_text, scratch);
  PcElement img = evaluate(data.pc, images, w);

  auto series = lcs(data.pc);
  SubgroupBasis trivial;
  const SubgroupBasis &gamma =
      (n >= 1 && n - 1 < series.size()) ? series[n - 1] : trivial;
  bool in_gamma = is_in_subgroup(data.pc, gamma, img);

  ordered_json params;
  params["pc"] = pc_path;
  params["word"] = word_arg;
  params["n"] = n;
  ordered_json j = header_json("gamma", params);
  ordered_json r;
  r["image_trivial"] = img.is_identity();
  r["in_gamma_n"] = in_gamma;
  r["lcs_lengths"] = [&] {
    ordered_json a = ordered_json::array();
    for (const auto &s : series)
      a.push_back(s.rows.size());
    return a;
  }();
  j["report"] = r;
  return emit(cfg, j, EXIT_PASS);
}

// -------------------------------------------------------------- pc-verify

ordered_json verify_json(const VerifyReport &rep) {
  ordered_json r;
  r["consistent"] = rep.consistent;
  ordered_json rels = ordered_json::array();
  for (bool ok : rep.relation_ok)
    rels.push_back(ok);
  r["relation_ok"] = rels;
  r["all_relations_ok"] = rep.all_relations_ok;
  if (rep.has_witness) {
    r["gamma_n"] = rep.gamma_n;
    r["w_trivial"] = rep.w_trivial;
    r["w_in_gamma_n"] = rep.w_in_gamma_n;
    r["w_cube_in_gamma_n"] = rep.w_cube_in_gamma_n;
  }
  return r;
}

int cmd_pc_verify(const RunConfig &cfg, const std::string &pc_path,
                  const std::string &pres_path, const std::string &word_path,
                  unsigned gamma_n) {
  PcData data = import_pc(slurp(pc_path));
  GroupPresentation pres = parse_presentation(slurp(pres_path));
  std::vector<PcElement> images;
  for (const auto &gid : pres.alphabet) {
    auto it = data.images.find(gid.name);
    if (it == data.images.end())
      throw std::runtime_error("pc file lacks an image for generator " +
                               gid.name);
    images.push_back(it->second);
  }
  WordExpr witness;
  bool has_word = !word_path.empty();
  if (has_word)
    witness = parse_word_expr(slurp(word_path), pres);

  VerifyReport rep = verify_relations(data.pc, images, pres,
                                      has_word ? &witness : nullptr, gamma_n);
  ordered_json params;
  params["pc"] = pc_path;
  params["pres"] = pres_path;
  if (has_word)
    params["word"] = word_path;
  params["gamma_n"] = gamma_n;
  ordered_json j = header_json("pc-verify", params);
  j["report"] = verify_json(rep);
  return emit(cfg, j, rep.pass() ? EXIT_PASS : EXIT_FAIL);
}

// ----------------------------------------------------------- paper-verify

int cmd_paper_verify(const RunConfig &cfg, unsigned cls, unsigned delta_cap) {
  const PaperFixture &fx = paper_fixture();
  ordered_json params;
  params["class"] = cls;
  params["delta_cap"] = delta_cap;
  params["budget"] = budget_json(cfg);
  ordered_json j = header_json("paper-verify", params);

  bool all_ok = true;
  bool budget_short = false;

  // 1. the weight-3 module computation
  LieCheckReport lie = weight3_check();
  j["lie_check"] = lie_report_json(lie);
  all_ok = all_ok && lie.pass();

  // 2. the congruence replay
  ReplayReport rp = replay_section1();
  j["replay"] = replay_json(rp);
  all_ok = all_ok && rp.pass();

  // 3. nilpotent quotient of Gbar with the witness checks
  {
    NilpotentQuotient q = nilpotent_quotient(fx.Gbar, cls, cfg.nq_budget());
    ordered_json sec;
    sec["summary"] = nq_summary_json(q);
    VerifyReport vr = verify_relations(q.pc, q.images, fx.Gbar);
    sec["relations_hold"] = vr.all_relations_ok;
    all_ok = all_ok && vr.all_relations_ok;

    PcElement wx = evaluate(q.pc, q.images, fx.w_x);
    PcElement wz = evaluate(q.pc, q.images, fx.w_z);
    bool same = (wx == wz);
    sec["wx_equals_wz"] = same;
    all_ok = all_ok && same;

    // w^3 in gamma_7: at a reached class below 7 this means triviality
    unsigned gn = std::min<unsigned>(7, q.cls + 1);
    SubgroupBasis basis = gamma_basis(q, gn);
    PcElement w3 = q.pc.pow(wx, 3);
    bool cube_in = is_in_subgroup(q.pc, basis, w3);
    sec["w_cube_in_gamma7"] = cube_in;
    sec["gamma_checked_at"] = gn;
    all_ok = all_ok && cube_in;

    if (q.cls >= 7) {
      // the gamma-side of the theorem, visible only at full class
      bool w_in_g7 = is_in_subgroup(q.pc, gamma_basis(q, 7), wx);
      sec["w_in_gamma7"] = w_in_g7;
      all_ok = all_ok && !w_in_g7;
    }
    if (q.budget_exceeded) {
      sec["note"] = "budget exhausted: checks ran at the largest reached "
                    "class " +
                    std::to_string(q.cls) + " of the requested " +
                    std::to_string(cls);
      budget_short = budget_short || q.cls < 5;
    }
    j["gbar_quotient"] = sec;
  }

  // 4. delta pipeline: free-group sanity plus Gbar at the configured cap
  {
    ordered_json sec;
    GroupPresentation f2;
    f2.alphabet = {{0, "x"}, {1, "y"}};
    WordExpr comm = WordExpr::commutator(
        {WordExpr::gen(0), WordExpr::gen(1)});
    DeltaReport d2 = delta_report(f2, comm, 2, cfg.nq_budget(),
                                  cfg.aug_budget());
    DeltaReport d3 = delta_report(f2, comm, 3, cfg.nq_budget(),
                                  cfg.aug_budget());
    sec["free2_comm_delta2"] = delta_json(d2);
    sec["free2_comm_delta3"] = delta_json(d3);
    all_ok = all_ok && d2.completed && d2.in_delta && d2.in_gamma;
    all_ok = all_ok && d3.completed && !d3.in_delta && !d3.in_gamma;

    DeltaReport dg = delta_report(fx.Gbar, fx.w_x, delta_cap, cfg.nq_budget(),
                                  cfg.aug_budget());
    sec["gbar_w_delta"] = delta_json(dg);
    if (dg.completed) {
      // w lies in gamma_5(G), hence in every delta_n with n <= 5; deeper
      // caps would be new information, not a necessary condition
      if (delta_cap <= 5)
        all_ok = all_ok && dg.in_delta;
    } else {
      budget_short = true;
    }
    j["delta_scope"] = sec;
  }

  j["pass"] = all_ok;
  return emit(cfg, j, !all_ok ? EXIT_FAIL
                              : (budget_short ? EXIT_BUDGET : EXIT_PASS));
}

// ----------------------------------------------------------------- fixtures

int cmd_fixtures(const std::string &dir) {
  auto write = [&](const std::string &name, const std::string &content) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + dir + "/" + name);
    out << content;
  };
  write("G.pres", fixture_file_G());
  write("Gbar.pres", fixture_file_Gbar());
  write("w.word", fixture_file_w());
  write("wz.word", fixture_file_wz());
  return EXIT_PASS;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"dimension quotient toolkit"};
  app.require_subcommand(1);
  app.fallthrough(); // global options may follow the subcommand

  RunConfig cfg;
  app.add_option("--out,-o", cfg.out_path, "write the JSON report here");
  app.add_option("--config", cfg.config_path,
                 "key=value file with default budgets");
  app.add_option("--threads", cfg.threads, "worker threads (reports are "
                                           "byte-identical for any value)");
  app.add_option("--time-budget", cfg.time_s, "wall clock budget, seconds");
  app.add_option("--memory-budget", cfg.memory_mb, "memory budget, MB");
  app.add_option("--max-gens", cfg.max_gens, "pc generator cap");
  app.add_option("--max-rows", cfg.max_rows, "relation row cap");
  app.add_option("--max-monomials", cfg.max_monomials, "monomial cap");

  auto *lie = app.add_subcommand("lie-check", "weight-3 module computation");

  auto *replay = app.add_subcommand("replay", "section-1 congruence replay");

  std::string word_text, gens_csv = "x1,x2,x3,x4";
  unsigned cap = 7;
  auto *magnus = app.add_subcommand("magnus", "Magnus embedding of a word");
  magnus->add_option("word", word_text, "word expression")->required();
  magnus->add_option("--cap", cap, "truncation degree");
  magnus->add_option("--gens", gens_csv, "comma-separated generator names");

  std::string pres_path, word_arg, pc_path;
  unsigned cls = 2, nval = 2, gamma_n = 7, delta_cap = 4;
  auto *nq = app.add_subcommand("nq", "nilpotent quotient of a presentation");
  nq->add_option("--pres", pres_path, "presentation file")->required();
  nq->add_option("--class", cls, "nilpotency class")->required();

  auto *delta = app.add_subcommand("delta", "delta_n membership pipeline");
  delta->add_option("--pres", pres_path, "presentation file")->required();
  delta->add_option("--word", word_arg, "word expression or file")->required();
  delta->add_option("-n", nval, "filtration depth")->required();

  auto *gamma = app.add_subcommand("gamma", "gamma_n membership in a pc group");
  gamma->add_option("--pc", pc_path, "pc JSON file")->required();
  gamma->add_option("--word", word_arg, "word expression or file")->required();
  gamma->add_option("-n", nval, "lower central depth")->required();

  auto *pcv = app.add_subcommand("pc-verify", "verify imported pc data");
  pcv->add_option("--pc", pc_path, "pc JSON file")->required();
  pcv->add_option("--pres", pres_path, "presentation file")->required();
  pcv->add_option("--word", word_arg, "witness word file");
  pcv->add_option("-n", gamma_n, "gamma depth for the witness checks");

  auto *paper = app.add_subcommand("paper-verify", "run the full pipeline");
  paper->add_option("--class", cls, "target class for the Gbar quotient")
      ->default_val(7u);
  paper->add_option("--delta-cap", delta_cap,
                    "cap for the Gbar delta pipeline");

  std::string fixture_dir = ".";
  auto *fixtures = app.add_subcommand("fixtures", "write fixture files");
  fixtures->add_option("--dir", fixture_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    // precedence: flags > config file > built-in defaults
    RunConfig file_cfg;
    file_cfg.config_path = cfg.config_path;
    load_config(file_cfg);
    if (!app.count("--time-budget"))
      cfg.time_s = file_cfg.time_s;
    if (!app.count("--memory-budget"))
      cfg.memory_mb = file_cfg.memory_mb;
    if (!app.count("--max-gens"))
      cfg.max_gens = file_cfg.max_gens;
    if (!app.count("--max-rows"))
      cfg.max_rows = file_cfg.max_rows;
    if (!app.count("--max-monomials"))
      cfg.max_monomials = file_cfg.max_monomials;

    if (app.got_subcommand(lie))
      return cmd_lie_check(cfg);
    if (app.got_subcommand(replay))
      return cmd_replay(cfg);
    if (app.got_subcommand(magnus))
      return cmd_magnus(cfg, word_text, cap, gens_csv);
    if (app.got_subcommand(nq))
      return cmd_nq(cfg, pres_path, cls);
    if (app.got_subcommand(delta))
      return cmd_delta(cfg, pres_path, word_arg, nval);
    if (app.got_subcommand(gamma))
      return cmd_gamma(cfg, pc_path, word_arg, nval);
    if (app.got_subcommand(pcv))
      return cmd_pc_verify(cfg, pc_path, pres_path, word_arg, gamma_n);
    if (app.got_subcommand(paper))
      return cmd_paper_verify(cfg, cls, delta_cap);
    if (app.got_subcommand(fixtures))
      return cmd_fixtures(fixture_dir);
  } catch (const ParseError &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return EXIT_USAGE;
  } catch (const BudgetExceeded &e) {
    std::cerr << "budget: " << e.what() << "\n";
    return EXIT_BUDGET;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_USAGE;
  }
  return EXIT_USAGE;
}
