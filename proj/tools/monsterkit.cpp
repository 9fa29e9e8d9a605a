#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "monsterkit/json_io.hpp"

using namespace monsterkit;
using namespace monsterkit::io;

namespace {

const std::vector<std::string> kChecks{"reproducible", "contracting", "separation", "cone-angle", "holonomy",
                                       "veech-lower",  "ends",        "secret",     "controls"};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ContractingWitness:
    case ErrorCode::MismatchWitness:
    case ErrorCode::EvidenceFailure: return 1;
    default: return 2;
  }
}

void diagnose(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

CheckReport from_error(const std::string& name, const Error& e) {
  CheckReport r;
  r.name = name;
  r.fail(e.code(), e.what());
  return r;
}

CheckReport passed(const std::string& name, const std::string& evidence) {
  CheckReport r;
  r.name = name;
  r.evidence = evidence;
  return r;
}

/// Horizontal slits and horizontal short saddle connections (undecorated builds).
CheckReport horizontal_check(const AssembledSurface& a, const Rational& max_length) {
  CheckReport r;
  r.name = "holonomy";
  const auto& c = a.complex;
  for (const auto& m : c.marks)
    if (c.holonomy(m).y != 0) {
      r.fail(ErrorCode::EvidenceFailure, "slit " + c.describe(m.id) + " is not horizontal");
      return r;
    }
  std::size_t n = 0;
  for (const auto& s : singularities(c))
    for (const auto& sc : enumerate_saddle_connections(c, s.id, max_length)) {
      ++n;
      if (sc.holonomy.y != 0) {
        std::ostringstream os;
        os << "saddle connection with holonomy " << sc.holonomy << " from cone point " << s.id;
        r.fail(ErrorCode::EvidenceFailure, os.str());
        return r;
      }
    }
  r.evidence = "window-limited: " + std::to_string(n) + " saddle connections up to length " + format_rational(max_length);
  return r;
}

std::vector<CheckReport> run_checks(const BuildConfig& cfg, const AssembledSurface& a, const std::set<std::string>& names,
                                    const Rational& max_length, const json* stored) {
  std::vector<CheckReport> out;
  bool deco = is_decorated(cfg.mode);
  auto want = [&](const std::string& n) { return names.count(n) > 0; };
  if (want("reproducible") && stored) {
    json rebuilt = build_output_json(cfg, a);
    if (rebuilt == *stored) out.push_back(passed("reproducible", "rebuilt surface.v1 is identical"));
    else out.push_back(from_error("reproducible", Error(ErrorCode::MismatchWitness, "stored surface differs from rebuild")));
  }
  if (want("contracting")) {
    try {
      auto rep = check_no_contracting(cfg.group, 6);
      out.push_back(passed("contracting", std::to_string(rep.checked) + " elements up to word length 6"));
    } catch (const Error& e) {
      out.push_back(from_error("contracting", e));
    }
  }
  if (want("separation") && deco) out.push_back(verify_buffer_separation(a));
  if (want("cone-angle")) out.push_back(verify_cone_angles(a));
  if (want("holonomy")) out.push_back(deco ? verify_veech_upper_evidence(a, max_length) : horizontal_check(a, max_length));
  if (want("veech-lower") && deco && a.ball.radius >= 1)
    for (const auto& h : a.ball.generators) out.push_back(verify_veech_lower(a, h));
  if (want("ends")) {
    if (deco) {
      auto cat = compute_ends(a);
      auto au = audit_ends(a, cat);
      CheckReport r;
      r.name = "ends";
      r.evidence = "exact combinatorics, levels 1.." + std::to_string(a.elem.tree.depth - 1) + ", class " + cat.canonical.str();
      if (!au.pass) r.fail(ErrorCode::MismatchWitness, au.witnesses.front());
      r.details = au.witnesses;
      out.push_back(r);
    } else {
      ClassTag want_tag = canonical_class(a.elem.ends_spec);
      ClassTag got = canonical_class(tree_ends(a.elem.tree));
      CheckReport r = passed("ends", "class " + got.str());
      if (!(got == want_tag)) r.fail(ErrorCode::MismatchWitness, "tree gives " + got.str() + ", spec " + want_tag.str());
      out.push_back(r);
    }
  }
  if (want("secret") && deco && a.ball.radius >= 1) {
    unsigned n = std::min<unsigned>(unsigned(a.ball.radius), a.elem.tree.depth - 1);
    try {
      auto ch = secret_end_witness(a, n);
      out.push_back(passed("secret", std::to_string(ch.regions.size()) + " nested regions, sizes " +
                                         std::to_string(ch.regions.front().size()) + ".." +
                                         std::to_string(ch.regions.back().size())));
    } catch (const Error& e) {
      out.push_back(from_error("secret", e));
    }
  }
  if (want("controls")) {
    CheckReport half = passed("control:contracting", "(1/2)Id rejected");
    try {
      check_no_contracting(GroupSpec{"half", {Rational(1, 2) * Mat2::identity(), Mat2::diag(2, 2)}}, 6);
      half.fail(ErrorCode::EvidenceFailure, "(1/2)Id was accepted");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContractingWitness) throw;
    }
    out.push_back(half);
    if (deco && !a.cross_gluings.empty() && cfg.N >= 2) {
      auto bad = swap_cross_gluings(a, 0);
      auto r = verify_veech_lower(bad, a.ball.generators[a.ball.edges[0].j - 1]);
      CheckReport c = passed("control:corrupted-gluing", "lower check rejects: " + r.witness);
      if (r.pass) c.fail(ErrorCode::EvidenceFailure, "swapped cross gluings were not detected");
      out.push_back(c);
    }
    if (deco) {
      auto cat = compute_ends(a);
      for (auto& p : cat.per_element) p.distinguished.back() = p.distinguished.back() == '0' ? '1' : '0';
      CheckReport c = passed("control:wrong-catalog", "ends audit rejects a moved distinguished end");
      if (audit_ends(a, cat).pass) c.fail(ErrorCode::EvidenceFailure, "audit accepted a wrong catalog");
      out.push_back(c);
    }
  }
  return out;
}

std::set<std::string> parse_checks(const std::string& list) {
  if (list == "all") return {kChecks.begin(), kChecks.end()};
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kChecks.begin(), kChecks.end(), item) == kChecks.end())
      throw Error(ErrorCode::Config, "unknown check " + item);
    out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monsterkit: build and verify infinite translation surfaces from slit constructions"};
  app.require_subcommand(1);

  std::string mode = "tan", ends_file, group_file, config_file, out, svg, dot, tree_out, in, checks = "all";
  std::string radius = "64", max_length = "2", groups_dir = MONSTERKIT_GROUPS_DIR;
  unsigned k = 1, depth = 5;
  int marks = 4, ball = 2;

  auto* build = app.add_subcommand("build", "assemble a surface and write surface.v1");
  build->add_option("--config", config_file, "build.v1 file (overrides the flags below)");
  build->add_option("--mode", mode)->check(CLI::IsMember({"tpp-p", "tpp-pprime", "genus-zero", "taf", "tan", "tnn"}));
  build->add_option("--k", k);
  build->add_option("--ends", ends_file, "ends-spec.v1 file");
  build->add_option("--group", group_file, "group.v1 file");
  build->add_option("--depth", depth);
  build->add_option("--marks", marks);
  build->add_option("--radius", radius);
  build->add_option("--ball", ball);
  build->add_option("--out", out)->required();
  build->add_option("--svg", svg);

  auto* verify = app.add_subcommand("verify", "rebuild a surface.v1 file and run checks, writing verify.v1");
  verify->add_option("--in", in)->required();
  verify->add_option("--checks", checks, "comma list or all");
  verify->add_option("--max-length", max_length);
  verify->add_option("--out", out);

  auto* ends = app.add_subcommand("ends", "print the ends catalog and canonical class");
  ends->add_option("--in", in)->required();

  auto* exp = app.add_subcommand("export", "write SVG of the surface and DOT of the Cayley ball or tree");
  exp->add_option("--in", in)->required();
  exp->add_option("--svg", svg);
  exp->add_option("--dot", dot, "Cayley ball");
  exp->add_option("--tree", tree_out, "tree.v1 JSON plus <path>.dot");

  auto* report = app.add_subcommand("report", "run every check on every bundled group");
  report->add_option("--groups", groups_dir);
  report->add_option("--max-length", max_length);
  report->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto load = [&](const std::string& path, BuildConfig& cfg, json& doc) {
    doc = read_file(path);
    expect_schema(doc, "surface.v1");
    if (!doc.contains("build")) throw Error(ErrorCode::Config, path + " has no build.v1 record");
    cfg = build_from_json(doc["build"]);
  };
  auto emit = [&](const std::string& text) {
    if (out.empty()) std::cout << text;
    else write_file(out, text);
  };

  try {
    if (*build) {
      BuildConfig cfg;
      if (!config_file.empty()) {
        cfg = build_from_json(read_file(config_file));
      } else {
        cfg.mode = parse_mode(mode);
        cfg.k = k;
        cfg.ends = ends_file.empty() ? default_ends(cfg.mode, k) : ends_from_json(read_file(ends_file));
        if (!group_file.empty()) cfg.group = group_from_json(read_file(group_file));
        cfg.R = parse_rational(radius);
        cfg.N = marks;
        cfg.depth = depth;
        cfg.ball = is_decorated(cfg.mode) ? ball : 0;
      }
      auto a = run_build(cfg);
      write_file(out, dump(build_output_json(cfg, a)));
      if (!svg.empty()) write_file(svg, to_svg(a.complex));
      std::cerr << a.ball.elements.size() << " pieces, " << a.complex.sheets.size() << " sheets, "
                << a.complex.marks.size() << " marks, " << a.complex.gluings.size() << " gluings\n";
      return 0;
    }
    if (*verify) {
      BuildConfig cfg;
      json doc;
      load(in, cfg, doc);
      auto names = parse_checks(checks);
      auto a = run_build(cfg);
      json v = verify_json(run_checks(cfg, a, names, parse_rational(max_length), &doc));
      emit(dump(v));
      return v["pass"].get<bool>() ? 0 : 1;
    }
    if (*ends) {
      BuildConfig cfg;
      json doc;
      load(in, cfg, doc);
      auto a = run_build(cfg);
      if (is_decorated(cfg.mode)) std::cout << compute_ends(a).str();
      else std::cout << "class " << canonical_class(a.elem.ends_spec).str() << "\n";
      return 0;
    }
    if (*exp) {
      BuildConfig cfg;
      json doc;
      load(in, cfg, doc);
      auto a = run_build(cfg);
      if (!svg.empty()) write_file(svg, to_svg(a.complex));
      if (!dot.empty()) write_file(dot, to_dot(a.ball));
      if (!tree_out.empty()) {
        write_file(tree_out, dump(tree_json(a.elem.tree, a.elem.family)));
        write_file(tree_out + ".dot", to_dot(a.elem.tree, a.elem.family));
      }
      return 0;
    }
    if (*report) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(groups_dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      json r{{"schema", "report.v1"}, {"runs", json::array()}};
      bool pass = true;
      for (const auto& f : files) {
        BuildConfig cfg;
        cfg.mode = TheoremMode::TAN;
        cfg.group = group_from_json(read_file(f.string()));
        cfg.N = 5;
        cfg.depth = 5;
        cfg.ball = 2;
        auto a = run_build(cfg);
        json v = verify_json(run_checks(cfg, a, {kChecks.begin(), kChecks.end()}, parse_rational(max_length), nullptr));
        pass = pass && v["pass"].get<bool>();
        r["runs"].push_back({{"group", f.filename().string()}, {"build", build_json(cfg)}, {"verify", v}});
      }
      r["pass"] = pass;
      emit(dump(r));
      return pass ? 0 : 1;
    }
  } catch (const Error& e) {
    diagnose(to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    diagnose("Config", e.what());
    return 2;
  }
  return 2;
}
