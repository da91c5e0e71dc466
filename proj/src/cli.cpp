#include "scw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "scw/cnf.hpp"
#include "scw/decomp.hpp"
#include "scw/incidence.hpp"
#include "scw/oracle.hpp"
#include "scw/shapedp.hpp"

namespace scw::cli {

namespace {

struct Config {
  std::string cnf_path;
  std::string decomp_path;
  std::string strategy = "heuristic";
  std::string free_vars = "multiply";
  std::string combine = "full";
  int exact_bound = 10;
  bool stats = false;
};

int thread_budget() {
  const char* raw = std::getenv("SCW_THREADS");
  if (!raw) return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (!end || *end != '\0' || v <= 1) return 1;
  return static_cast<int>(std::min(v, 64L));
}

Count pow2(unsigned long n) {
  Count c;
  mpz_ui_pow_ui(c.get_mpz_t(), 2, n);
  return c;
}

CombineMode combine_mode(const Config& cfg) {
  return cfg.combine == "filtered" ? CombineMode::kFiltered : CombineMode::kFullScan;
}

struct Instance {
  CnfFormula raw;
  CnfFormula formula;  // normalized; valid unless empty_clause
  NormalizationReport report;
  IncidenceGraph graph;
  bool empty_clause = false;
};

int load_instance(const std::string& path, Instance& inst, std::ostream& err) {
  std::ifstream file(path);
  if (!file) {
    err << "cannot open " << path << "\n";
    return 2;
  }
  try {
    inst.raw = parse_dimacs(file);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    return 2;
  }
  try {
    NormalizeResult nr = normalize(inst.raw);
    inst.formula = std::move(nr.formula);
    inst.report = std::move(nr.report);
  } catch (const EmptyClauseError&) {
    inst.empty_clause = true;
    return 0;
  }
  inst.graph = IncidenceGraph(inst.formula);
  return 0;
}

// 0 on success with `tree` filled, else the exit code.
int make_tree(const Instance& inst, const Config& cfg, DecompositionTree& tree,
              std::ostream& err) {
  if (cfg.strategy == "file") {
    std::ifstream file(cfg.decomp_path);
    if (!file) {
      err << "cannot open " << cfg.decomp_path << "\n";
      return 3;
    }
    std::ostringstream text;
    text << file.rdbuf();
    try {
      tree = parse_decomposition(text.str(), inst.graph);
    } catch (const DecompParseError& e) {
      err << cfg.decomp_path << ": " << e.what() << "\n";
      return 3;
    }
    return 0;
  }
  if (cfg.strategy == "exact") {
    try {
      tree = exact_min_index_tree(inst.graph, cfg.exact_bound);
    } catch (const ExactSearchLimitError& e) {
      err << e.what() << "\n";
      return 4;
    }
    return 0;
  }
  tree = heuristic_tree(inst.graph);
  return 0;
}

void print_stats(std::ostream& err, const CnfFormula& f, int rankwidth, int index,
                 const CountStats& stats, long long millis) {
  err << "m=" << f.clause_count() << "\n"
      << "l=" << f.length() << "\n"
      << "vars=" << f.variable_count() << "\n"
      << "rankwidth=" << rankwidth << "\n"
      << "index=" << index << "\n"
      << "max_table=" << stats.max_table << "\n"
      << "nodes=" << stats.nodes << "\n"
      << "millis=" << millis << "\n";
}

int cmd_count(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Instance inst;
  if (int rc = load_instance(cfg.cnf_path, inst, err)) return rc;

  Count result;
  CountStats stats;
  int rankwidth = 0, index = 0;
  const CnfFormula& reported = inst.empty_clause ? inst.raw : inst.formula;

  if (inst.empty_clause) {
    result = 0;
  } else if (inst.formula.clause_count() == 0) {
    result = cfg.free_vars == "ignore" ? Count(1)
                                       : pow2(inst.report.free_variables.size());
  } else {
    DecompositionTree tree;
    if (int rc = make_tree(inst, cfg, tree, err)) return rc;
    AnnotatedTree at;
    try {
      at = annotate(tree, inst.formula, inst.graph);
    } catch (const std::invalid_argument& e) {
      err << e.what() << "\n";
      return 3;
    }
    result = count_models(at, combine_mode(cfg), thread_budget(), &stats);
    if (cfg.free_vars != "ignore") result *= pow2(inst.report.free_variables.size());
    rankwidth = at.rankwidth;
    index = at.index;
  }

  out << result.get_str() << "\n";
  if (cfg.stats) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    print_stats(err, reported, rankwidth, index, stats,
                std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
  }
  return 0;
}

int cmd_decompose(const Config& cfg, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_instance(cfg.cnf_path, inst, err)) return rc;
  if (inst.empty_clause) {
    err << "formula contains an empty clause; nothing to decompose\n";
    return 2;
  }
  if (inst.graph.vertex_count() == 0) {
    out << "# empty graph\n";
    return 0;
  }
  DecompositionTree tree;
  if (int rc = make_tree(inst, cfg, tree, err)) return rc;
  const AnnotatedTree at = annotate(tree, inst.formula, inst.graph);
  out << "# rankwidth " << at.rankwidth << "\n"
      << "# index " << at.index << "\n"
      << emit_decomposition(tree, inst.graph);
  return 0;
}

int cmd_width(const Config& cfg, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_instance(cfg.cnf_path, inst, err)) return rc;
  if (inst.empty_clause) {
    err << "formula contains an empty clause; no incidence graph\n";
    return 2;
  }
  int rankwidth = 0, index = 0;
  if (inst.graph.vertex_count() > 0) {
    Config file_cfg = cfg;
    file_cfg.strategy = "file";
    DecompositionTree tree;
    if (int rc = make_tree(inst, file_cfg, tree, err)) return rc;
    const AnnotatedTree at = annotate(tree, inst.formula, inst.graph);
    rankwidth = at.rankwidth;
    index = at.index;
  }
  out << "rankwidth=" << rankwidth << "\n"
      << "index=" << index << "\n";
  if (index < rankwidth || (rankwidth < 63 && index > (1LL << rankwidth))) {
    err << "width sanity violated: rankwidth=" << rankwidth << " index=" << index << "\n";
    return 1;
  }
  return 0;
}

int cmd_oracle(const Config& cfg, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_instance(cfg.cnf_path, inst, err)) return rc;
  Count result;
  if (inst.empty_clause) {
    result = 0;
  } else {
    try {
      result = brute_count(inst.formula);
    } catch (const BudgetExceededError& e) {
      err << e.what() << "\n";
      return 4;
    }
    if (cfg.free_vars != "ignore") result *= pow2(inst.report.free_variables.size());
  }
  out << result.get_str() << "\n";
  return 0;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_instance(cfg.cnf_path, inst, err)) return rc;
  if (inst.empty_clause || inst.formula.clause_count() == 0) {
    out << "degenerate instance, nothing to cross-check\n";
    return 0;
  }

  DecompositionTree tree;
  if (int rc = make_tree(inst, cfg, tree, err)) return rc;
  const AnnotatedTree at = annotate(tree, inst.formula, inst.graph);
  const CnfFormula& f = inst.formula;

  bool all_ok = true;
  const auto check = [&](const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    all_ok = all_ok && ok;
  };

  try {
    check("rankwidth <= index <= 2^rankwidth",
          at.rankwidth <= at.index &&
              (at.rankwidth >= 63 || at.index <= (1LL << at.rankwidth)));

    std::vector<ShapeTable> tables(at.tree.nodes.size());
    for (int u : at.tree.postorder()) {
      const auto& nd = at.tree.nodes[static_cast<std::size_t>(u)];
      tables[static_cast<std::size_t>(u)] =
          nd.is_leaf() ? leaf_table(at, u)
                       : combine_tables(at, u, tables[static_cast<std::size_t>(nd.left)],
                                        tables[static_cast<std::size_t>(nd.right)],
                                        combine_mode(cfg));
    }
    const Shape empty_shape{f.no_clauses(), f.no_clauses()};
    const auto& root_entries = tables[static_cast<std::size_t>(at.tree.root)].entries;
    const auto root_it = root_entries.find(empty_shape);
    const Count dp = root_it == root_entries.end() ? Count(0) : root_it->second;
    check("count matches enumeration", dp == brute_count(f));

    const auto root_proper = proper_shapes(f, at.context(at.tree.root));
    check("root has exactly the empty realizable shape",
          root_proper.size() == 1 && root_proper[0] == empty_shape);

    bool contained = true, bounded = true, exact = true, never_over = true;
    Count size_bound;
    mpz_ui_pow_ui(size_bound.get_mpz_t(),
                  static_cast<unsigned long>(f.clause_count()) + 1,
                  2 * static_cast<unsigned long>(std::max(at.index, 1)));
    for (int u : at.tree.postorder()) {
      const NodeContext& ctx = at.context(u);
      const std::vector<Shape> restricted = restricted_shapes(f, ctx);
      const std::vector<Shape> proper = proper_shapes(f, ctx);
      contained = contained &&
                  std::includes(restricted.begin(), restricted.end(), proper.begin(), proper.end());
      bounded = bounded && Count(static_cast<unsigned long>(restricted.size())) <= size_bound;
      for (const auto& [s, val] : tables[static_cast<std::size_t>(u)].entries) {
        const Count truth = shape_count(f, ctx, s);
        never_over = never_over && val <= truth;
        if (std::binary_search(proper.begin(), proper.end(), s))
          exact = exact && val == truth;
      }
    }
    check("realizable shapes stay within the tracked shapes", contained);
    check("tracked shape count within the size bound", bounded);
    check("table values exact on realizable shapes", exact);
    check("table values never overcount", never_over);
  } catch (const BudgetExceededError& e) {
    err << e.what() << "\n";
    return 4;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"exact model counter over incidence-graph decomposition trees"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd, bool with_strategy) {
    cmd->add_option("cnf", cfg.cnf_path, "DIMACS CNF file")->required();
    if (with_strategy) {
      cmd->add_option("--strategy", cfg.strategy, "decomposition strategy")
          ->check(CLI::IsMember({"exact", "heuristic", "file"}))
          ->capture_default_str();
      cmd->add_option("--decomp", cfg.decomp_path, "decomposition file for --strategy file");
      cmd->add_option("--exact-bound", cfg.exact_bound,
                      "largest vertex count the exact strategy accepts")
          ->capture_default_str();
      cmd->add_option("--combine", cfg.combine, "inner-node table combination")
          ->check(CLI::IsMember({"full", "filtered"}))
          ->capture_default_str();
    }
  };

  CLI::App* count = app.add_subcommand("count", "print the model count");
  add_common(count, true);
  count->add_option("--free-vars", cfg.free_vars, "handling of declared non-occurring variables")
      ->check(CLI::IsMember({"multiply", "ignore"}))
      ->capture_default_str();
  count->add_flag("--stats", cfg.stats, "print key=value statistics to stderr");

  CLI::App* decompose = app.add_subcommand("decompose", "print a decomposition of the incidence graph");
  decompose->add_option("cnf", cfg.cnf_path, "DIMACS CNF file")->required();
  decompose->add_option("--strategy", cfg.strategy, "decomposition strategy")
      ->check(CLI::IsMember({"exact", "heuristic"}))
      ->capture_default_str();
  decompose->add_option("--exact-bound", cfg.exact_bound,
                        "largest vertex count the exact strategy accepts")
      ->capture_default_str();

  CLI::App* width = app.add_subcommand("width", "report widths of a decomposition file");
  width->add_option("cnf", cfg.cnf_path, "DIMACS CNF file")->required();
  width->add_option("--decomp", cfg.decomp_path, "decomposition file")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "model count by brute-force enumeration");
  oracle->add_option("cnf", cfg.cnf_path, "DIMACS CNF file")->required();
  oracle->add_option("--free-vars", cfg.free_vars, "handling of declared non-occurring variables")
      ->check(CLI::IsMember({"multiply", "ignore"}))
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "cross-check the tables against enumeration");
  add_common(verify, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 64;
  }

  if (cfg.strategy == "file" && cfg.decomp_path.empty()) {
    err << "--strategy file requires --decomp\n";
    return 64;
  }

  if (count->parsed()) return cmd_count(cfg, out, err);
  if (decompose->parsed()) return cmd_decompose(cfg, out, err);
  if (width->parsed()) return cmd_width(cfg, out, err);
  if (oracle->parsed()) return cmd_oracle(cfg, out, err);
  return cmd_verify(cfg, out, err);
}

}  // namespace scw::cli
