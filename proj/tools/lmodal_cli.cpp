// Command-line front end.  Every command writes its evidence (proofs,
// countermodels, listings, reports) to files so each claim can be re-checked
// independently; stdout carries a one-line human summary.
//
// Exit codes: 0 = success / provable / found; 1 = refutable / invalid /
// not-found; 2 = usage, parse, or resource error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmodal/semlab.hpp"

namespace {

using namespace lmodal;

std::vector<Formula> parse_premises(const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const std::string& t : texts) out.push_back(parse(t));
  return out;
}

int cmd_prove_ipc(const std::string& formula_text,
                  const std::vector<std::string>& premise_texts,
                  const std::string& out_path, long fuel) {
  Formula goal = parse(formula_text);
  std::vector<Formula> premises = parse_premises(premise_texts);
  IpcVerdict v = ipc_prove(premises, goal, fuel);
  if (v.provable) {
    save_file(out_path, write_hilbert(v.proof));
    std::cout << "provable; proof written to " << out_path << "\n";
    return 0;
  }
  save_file(out_path, write_kripke(v.model));
  std::cout << "refutable; countermodel written to " << out_path << "\n";
  return 1;
}

int cmd_check(const std::string& path) {
  std::string text = load_file(path);
  std::string kind = sniff_kind(text);
  if (kind == "ipcproof") {
    HilbertProof p = read_hilbert(text);
    Sequent s{p.premises, p.conclusion()};
    HCheck c = check_hilbert_ipc(p, s);
    if (!c) {
      std::cerr << "invalid: " << c.reason << "\n";
      return 1;
    }
    std::cout << "ok: derivation of " << print(p.conclusion()) << "\n";
    return 0;
  }
  if (kind == "lproof") {
    LProof p = read_lproof(text);
    LCheck c = check_lproof(p);
    if (!c) {
      std::cerr << "invalid: " << c.reason << "\n";
      return 1;
    }
    std::cout << "ok: derivation of " << print(p.conclusion()) << "\n";
    return 0;
  }
  if (kind == "lmodel") {
    read_lmodel(text);  // validates or throws
    std::cout << "ok: model satisfies all conditions\n";
    return 0;
  }
  if (kind == "kripke") {
    read_kripke(text);  // validates or throws
    std::cout << "ok: well-formed rooted model\n";
    return 0;
  }
  std::cerr << "error: unrecognized file kind '" << kind << "'\n";
  return 2;
}

int cmd_embed(const std::string& path, const std::string& out_path) {
  HilbertProof hp = read_hilbert(load_file(path));
  LProof lp = embed_ipc(hp);
  LCheck c = check_lproof(lp);
  if (!c) throw SoundnessError("embedded proof rejected: " + c.reason);
  save_file(out_path, write_lproof(lp));
  std::cout << "embedded; derivation of " << print(lp.conclusion())
            << " written to " << out_path << "\n";
  return 0;
}

int cmd_enumerate(const std::string& kind, int max_algebra,
                  const std::string& out_path) {
  std::string out;
  long count = 0;
  if (kind == "algebras") {
    const auto& hs = enumerate_heyting(max_algebra);
    for (const Heyting& h : hs) out += write_heyting(h);
    count = static_cast<long>(hs.size());
  } else if (kind == "ultrafilters") {
    const auto& hs = enumerate_heyting(max_algebra);
    for (size_t i = 0; i < hs.size(); ++i) {
      auto ufs = enumerate_ultrafilters(hs[i]);
      out += "algebra " + std::to_string(i) + " size " +
             std::to_string(hs[i].n) + " ultrafilters " +
             std::to_string(ufs.size()) + "\n";
      for (uint32_t mask : ufs) {
        out += "uf :";
        for (int e = 0; e < hs[i].n; ++e)
          if ((mask >> e) & 1) out += " " + std::to_string(e);
        out += "\n";
      }
      count += static_cast<long>(ufs.size());
    }
  } else {  // models
    const auto& ms = enumerate_lmodels(max_algebra);
    for (const LModel& m : ms) out += write_lmodel(m);
    count = static_cast<long>(ms.size());
  }
  save_file(out_path, out);
  std::cout << count << " " << kind << " written to " << out_path << "\n";
  return 0;
}

int cmd_sweep(int vars, int size, uint64_t seed, const std::string& out_dir) {
  SweepReport rep = sweep(vars, size, seed, out_dir);
  std::cout << "swept " << rep.items.size() << " formulas: " << rep.count_ipc
            << " provable, " << rep.count_cpc_only << " classical-only, "
            << rep.count_neither << " neither; " << rep.evidence_failures
            << " evidence failures; report in " << out_dir << "/report.txt\n";
  return 0;
}

int cmd_countermodel(const std::string& formula_text,
                     const std::vector<std::string>& premise_texts,
                     int max_algebra, const std::string& out_path) {
  Formula goal = parse(formula_text);
  std::vector<Formula> premises = parse_premises(premise_texts);
  SearchBounds b;
  b.max_algebra = max_algebra;
  SearchResult r = countermodel_search(premises, goal, b);
  if (!r.found) {
    std::cerr << "not found: " << r.reason << "\n";
    return 1;
  }
  Assignment restricted;
  std::set<Var> vs;
  for (Formula f : premises)
    for (Var v : vars_of(f)) vs.insert(v);
  for (Var v : vars_of(goal)) vs.insert(v);
  for (Var v : vs) restricted[v] = r.gamma.at(v);
  save_file(out_path, write_lmodel(r.model, restricted));
  std::cout << "found; countermodel written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for a modal companion of intuitionistic logic"};
  app.require_subcommand(1);

  std::string formula_text, path, out_path;
  std::vector<std::string> premise_texts;
  long fuel = 2'000'000;
  int max_algebra = 4;
  int vars = 2, size = 7;
  uint64_t seed = 0;

  CLI::App* prove = app.add_subcommand(
      "prove-ipc", "decide an intuitionistic sequent; emit proof or "
                   "countermodel");
  prove->add_option("formula", formula_text, "goal formula")->required();
  prove->add_option("--premise", premise_texts, "premise (repeatable)");
  prove->add_option("--out", out_path, "evidence file")
      ->default_val("evidence.out");
  prove->add_option("--fuel", fuel, "search step budget");

  CLI::App* check =
      app.add_subcommand("check", "validate a proof or model file");
  check->add_option("file", path, "file to check")->required();

  CLI::App* embed = app.add_subcommand(
      "embed", "translate an implicational derivation into the modal system");
  embed->add_option("file", path, "ipcproof file")->required();
  embed->add_option("--out", out_path, "output file")
      ->default_val("embedded.out");

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "list algebras, ultrafilters, or models");
  std::string kind;
  enumerate->add_option("kind", kind, "what to list")
      ->required()
      ->check(CLI::IsMember({"algebras", "ultrafilters", "models"}));
  enumerate->add_option("--max-algebra", max_algebra, "largest algebra size");
  enumerate->add_option("--out", out_path, "listing file")
      ->default_val("listing.out");

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "classify every propositional formula of a fragment");
  sweep_cmd->add_option("--vars", vars, "number of variables");
  sweep_cmd->add_option("--size", size, "maximum formula size");
  sweep_cmd->add_option("--seed", seed, "seed for the randomized spot checks");
  sweep_cmd->add_option("--out", out_path, "output directory")
      ->default_val("sweep_out");

  CLI::App* cm = app.add_subcommand(
      "countermodel", "search enumerated models for a countermodel");
  cm->add_option("formula", formula_text, "goal formula")->required();
  cm->add_option("--premise", premise_texts, "premise (repeatable)");
  cm->add_option("--max-algebra", max_algebra, "largest algebra size");
  cm->add_option("--out", out_path, "model file")->default_val("model.out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (prove->parsed())
      return cmd_prove_ipc(formula_text, premise_texts, out_path, fuel);
    if (check->parsed()) return cmd_check(path);
    if (embed->parsed()) return cmd_embed(path, out_path);
    if (enumerate->parsed())
      return cmd_enumerate(kind, max_algebra, out_path);
    if (sweep_cmd->parsed()) return cmd_sweep(vars, size, seed, out_path);
    if (cm->parsed())
      return cmd_countermodel(formula_text, premise_texts, max_algebra,
                              out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
