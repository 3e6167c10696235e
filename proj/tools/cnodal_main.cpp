// cnodal: command line driver for sublevel barcodes, scaling sweeps, and
// adaptive dyadic partitions. Exit codes: 0 ok, 2 bad input, 3 resolution
// rejected, 4 bad configuration, 5 subdivision depth cap.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cnodal/barcode.hpp"
#include "cnodal/barcode_json.hpp"
#include "cnodal/cubical.hpp"
#include "cnodal/dyadic.hpp"
#include "cnodal/errors.hpp"
#include "cnodal/field_spec.hpp"
#include "cnodal/grid.hpp"
#include "cnodal/spectral.hpp"
#include "cnodal/trig.hpp"
#include "cnodal/util.hpp"
#include "cnodal/version.hpp"

namespace {

using nlohmann::json;

std::string dump_num(double v) { return json(v).dump(); }

std::string hash_hex(const std::string& s) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << cnodal::fnv1a64(s);
  return os.str();
}

// Hash of the resolved config without output plumbing, so the same computation
// sent to a different directory or row format keeps its identity.
std::string config_hash(json resolved) {
  resolved.erase("out");
  resolved.erase("format");
  return hash_hex(resolved.dump());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw cnodal::input_error("cannot open output file " + path);
  f << content;
  if (!f.good()) throw cnodal::input_error("failed writing output file " + path);
}

std::string header_comment(const std::string& hash, const std::string& desc) {
  std::ostringstream os;
  os << "# library_version: " << cnodal::library_version << "\n"
     << "# config_hash: " << hash << "\n"
     << "# description: " << desc << "\n";
  return os.str();
}

struct Opts {
  std::string config_path;
  std::uint64_t seed = 20240901;
  std::vector<double> deltas;
  std::vector<double> lambdas;
  int k = 2;
  std::string p = "2";
  std::string mode = "single";
  std::string out_dir = ".";
  std::string format = "csv";
  bool dry_run = false;
  std::string field_json;
  bool take_abs = false;
  bool take_negate = false;
  std::int64_t mult = 2;
  int n = 1;
  int trials = 10;
  double A = 64.0;
  double a1 = 1.0;
  double alpha = 4.0;
  double beta = 1.0;
  int max_level = 24;
};

bool flag_given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* op = sub->get_option_no_throw(name);
  return op != nullptr && op->count() > 0;
}

std::vector<double> to_list(const json& v, const char* key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number())
        throw cnodal::input_error(std::string("config: '") + key +
                                  "' must contain numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  throw cnodal::input_error(std::string("config: '") + key +
                            "' must be a number or an array");
}

json load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw cnodal::input_error("cannot read config file " + path);
  std::ostringstream os;
  os << f.rdbuf();
  json j = json::parse(os.str(), nullptr, false);
  if (j.is_discarded())
    throw cnodal::input_error("config file " + path + " is not valid JSON");
  if (!j.is_object())
    throw cnodal::input_error("config file " + path + " must hold a JSON object");
  return j;
}

void merge_config(const CLI::App* sub, Opts& o) {
  if (o.config_path.empty()) return;
  const json cfg = load_config(o.config_path);
  const auto want = [&](const char* key, const char* flag) {
    return cfg.contains(key) && !flag_given(sub, flag);
  };
  if (want("seed", "--seed")) o.seed = cfg.at("seed").get<std::uint64_t>();
  if (want("delta", "--delta")) o.deltas = to_list(cfg.at("delta"), "delta");
  if (want("lambda", "--lambda")) o.lambdas = to_list(cfg.at("lambda"), "lambda");
  if (want("k", "--k")) o.k = cfg.at("k").get<int>();
  if (want("p", "--p")) {
    const json& v = cfg.at("p");
    o.p = v.is_string() ? v.get<std::string>() : json(v).dump();
  }
  if (want("mode", "--mode")) o.mode = cfg.at("mode").get<std::string>();
  if (want("out", "--out")) o.out_dir = cfg.at("out").get<std::string>();
  if (want("format", "--format")) o.format = cfg.at("format").get<std::string>();
  if (want("field", "--field")) {
    const json& v = cfg.at("field");
    o.field_json = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (want("abs", "--abs")) o.take_abs = cfg.at("abs").get<bool>();
  if (want("negate", "--negate")) o.take_negate = cfg.at("negate").get<bool>();
  if (want("mult", "--mult")) o.mult = cfg.at("mult").get<std::int64_t>();
  if (want("n", "--n")) o.n = cfg.at("n").get<int>();
  if (want("trials", "--trials")) o.trials = cfg.at("trials").get<int>();
  if (want("A", "--A")) o.A = cfg.at("A").get<double>();
  if (want("a1", "--a1")) o.a1 = cfg.at("a1").get<double>();
  if (want("alpha", "--alpha")) o.alpha = cfg.at("alpha").get<double>();
  if (want("beta", "--beta")) o.beta = cfg.at("beta").get<double>();
  if (want("max_level", "--max-level")) o.max_level = cfg.at("max_level").get<int>();
}

double parse_p(const std::string& text) {
  std::string t = text;
  for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "inf" || t == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw cnodal::input_error("cannot parse integrability exponent '" + text +
                              "' (expected a number or 'inf')");
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw cnodal::input_error("cannot create output directory " + dir + ": " +
                              ec.message());
}

json field_as_json(const std::string& field_text) {
  json j = json::parse(field_text, nullptr, false);
  if (j.is_discarded())
    throw cnodal::input_error("field spec: malformed JSON");
  return j;
}

// ---- barcode ----------------------------------------------------------------

int run_barcode(Opts& o) {
  if (o.field_json.empty())
    throw cnodal::input_error("barcode: missing --field descriptor");
  if (o.deltas.empty()) o.deltas = {0.1, 0.5, 0.9};

  json resolved;
  resolved["command"] = "barcode";
  resolved["field"] = field_as_json(o.field_json);
  resolved["abs"] = o.take_abs;
  resolved["negate"] = o.take_negate;
  resolved["delta"] = o.deltas;
  resolved["mult"] = o.mult;
  resolved["seed"] = o.seed;
  resolved["out"] = o.out_dir;
  resolved["format"] = o.format;
  const std::string hash = config_hash(resolved);
  if (o.dry_run) {
    std::cout << resolved.dump(2) << "\n";
    return 0;
  }

  const cnodal::RealizedField realized = cnodal::realize_field(o.field_json, o.seed);
  cnodal::GridField grid = cnodal::realize_grid(realized, o.mult);
  std::string desc = realized.description;
  if (o.take_abs) {
    grid = cnodal::absolute(grid);
    desc += ", abs";
  }
  if (o.take_negate) {
    grid = cnodal::negated(grid);
    desc += ", negated";
  }

  const cnodal::GradedBarcode bc = cnodal::sublevel_barcode(grid);

  ensure_out_dir(o.out_dir);
  json out;
  out["library_version"] = cnodal::library_version;
  out["config_hash"] = hash;
  out["description"] = desc;
  out["barcode"] = cnodal::barcode_to_json(bc);
  write_text(o.out_dir + "/barcode.json", out.dump(2) + "\n");

  std::ostringstream table;
  table << "degree,delta,count\n";
  for (int deg = 0; deg <= std::max(bc.max_degree(), 0); ++deg)
    for (double d : o.deltas)
      table << deg << "," << dump_num(d) << ","
            << cnodal::n_delta(bc, d, deg) << "\n";
  write_text(o.out_dir + "/counts.csv",
             header_comment(hash, desc) + table.str());
  std::cout << table.str();
  std::cout << "barcode written to " << o.out_dir << "/barcode.json ("
            << bc.size() << " bars)\n";
  return 0;
}

// ---- sweep ------------------------------------------------------------------

int run_sweep(Opts& o) {
  if (o.deltas.empty())
    o.deltas = (o.mode == "wiggly") ? std::vector<double>{} : std::vector<double>{0.5};

  json resolved;
  resolved["command"] = "sweep";
  resolved["mode"] = o.mode;
  resolved["n"] = o.n;
  resolved["lambda"] = o.lambdas;
  resolved["delta"] = o.deltas;
  resolved["trials"] = o.trials;
  resolved["seed"] = o.seed;
  resolved["A"] = o.A;
  resolved["a1"] = o.a1;
  resolved["alpha"] = o.alpha;
  resolved["beta"] = o.beta;
  resolved["out"] = o.out_dir;
  resolved["format"] = o.format;
  const std::string hash = config_hash(resolved);
  if (o.dry_run) {
    std::cout << resolved.dump(2) << "\n";
    return 0;
  }

  cnodal::ScalingReport rep;
  std::string param_name = "lambda";
  std::vector<cnodal::WigglyRow> wiggly_rows;
  if (o.mode == "wiggly") {
    const cnodal::WigglyReport wrep =
        cnodal::wiggly_example(o.alpha, o.beta, o.deltas);
    rep = wrep.scaling;
    wiggly_rows = wrep.rows;
    param_name = "delta";
  } else if (o.mode == "sharpness") {
    const double depth = o.deltas.empty() ? 1.0 : o.deltas.front();
    rep = cnodal::sharpness_sweep(o.n, o.lambdas, depth, o.A, o.a1, o.seed);
  } else {
    const cnodal::SweepMode mode = cnodal::sweep_mode_from_string(o.mode);
    if (o.deltas.empty())
      throw cnodal::config_error("sweep: a delta value is required");
    rep = cnodal::courant_sweep(o.n, o.lambdas, o.deltas.front(), o.trials,
                                mode, o.seed);
  }

  ensure_out_dir(o.out_dir);

  std::ostringstream rows_csv;
  rows_csv << param_name << ",trial,count,resolution,seed\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const cnodal::ScalingRow& r = rep.rows[i];
    const double param_out = (o.mode == "wiggly") ? wiggly_rows.at(i).delta
                                                  : r.parameter - 1.0;
    rows_csv << dump_num(param_out) << "," << r.trial << ","
             << dump_num(r.count) << "," << r.resolution << "," << r.seed
             << "\n";
  }

  if (o.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const cnodal::ScalingRow& r = rep.rows[i];
      json row;
      row[param_name] = (o.mode == "wiggly") ? wiggly_rows.at(i).delta
                                             : r.parameter - 1.0;
      row["trial"] = r.trial;
      row["count"] = r.count;
      row["resolution"] = r.resolution;
      row["seed"] = r.seed;
      rows.push_back(std::move(row));
    }
    json out;
    out["library_version"] = cnodal::library_version;
    out["config_hash"] = hash;
    out["ensemble"] = rep.ensemble;
    out["rows"] = std::move(rows);
    write_text(o.out_dir + "/sweep.json", out.dump(2) + "\n");
  } else if (o.format == "csv") {
    write_text(o.out_dir + "/sweep.csv",
               header_comment(hash, rep.ensemble) + rows_csv.str());
  } else {
    throw cnodal::input_error("unknown --format '" + o.format +
                              "' (expected csv or json)");
  }

  json summary;
  summary["library_version"] = cnodal::library_version;
  summary["config_hash"] = hash;
  summary["ensemble"] = rep.ensemble;
  summary["exponent"] = rep.exponent;
  summary["ci"] = rep.exponent_ci;
  summary["C1"] = rep.c1;
  summary["C2"] = rep.c2;
  summary["parameter_values"] = rep.parameter_values;
  summary["medians"] = rep.medians;
  write_text(o.out_dir + "/summary.json", summary.dump(2) + "\n");

  std::cout << "exponent " << dump_num(rep.exponent) << " ci "
            << dump_num(rep.exponent_ci) << " C1 " << dump_num(rep.c1)
            << " C2 " << dump_num(rep.c2) << "\n";
  return 0;
}

// ---- mdp --------------------------------------------------------------------

int run_mdp(Opts& o) {
  if (o.field_json.empty())
    throw cnodal::input_error("mdp: missing --field descriptor");
  if (o.deltas.empty()) o.deltas = {0.1};
  std::sort(o.deltas.begin(), o.deltas.end());

  json resolved;
  resolved["command"] = "mdp";
  resolved["field"] = field_as_json(o.field_json);
  resolved["delta"] = o.deltas;
  resolved["k"] = o.k;
  resolved["p"] = o.p;
  resolved["max_level"] = o.max_level;
  resolved["seed"] = o.seed;
  resolved["out"] = o.out_dir;
  resolved["format"] = o.format;
  const std::string hash = config_hash(resolved);
  if (o.dry_run) {
    std::cout << resolved.dump(2) << "\n";
    return 0;
  }

  const cnodal::RealizedField realized = cnodal::realize_field(o.field_json, o.seed);
  cnodal::DyadicInput input = realized.trig
                                  ? cnodal::DyadicInput(*realized.trig)
                                  : cnodal::DyadicInput(*realized.grid);
  const int n = realized.trig ? realized.trig->n
                              : static_cast<int>(realized.grid->dims.size());
  cnodal::SobolevParams params;
  params.k = o.k;
  params.p = parse_p(o.p);
  params.n = n;
  params.validate();

  const cnodal::MdpBuild build =
      cnodal::build_mdp(input, o.deltas.front(), params, o.max_level);

  ensure_out_dir(o.out_dir);
  json out;
  out["library_version"] = cnodal::library_version;
  out["config_hash"] = hash;
  out["description"] = realized.description;
  out["mdp"] = json::parse(cnodal::mdp_to_json_string(build));
  write_text(o.out_dir + "/mdp.json", out.dump(2) + "\n");
  std::cout << "partition with " << build.partition.cubes.size()
            << " leaves at delta " << dump_num(o.deltas.front()) << "\n";

  if (realized.trig) {
    std::vector<cnodal::MdpCheckReport> reports;
    for (double d : o.deltas)
      reports.push_back(cnodal::mdp_count_check(input, d, params, o.max_level));
    write_text(o.out_dir + "/report.csv",
               header_comment(hash, realized.description) +
                   cnodal::mdp_report_csv(reports));
    for (const auto& r : reports)
      std::cout << "delta " << dump_num(r.delta) << ": leaves " << r.k_size
                << ", count " << dump_num(r.n_actual) << ", bound "
                << dump_num(r.bound) << ", holds "
                << (r.holds ? "true" : "false") << "\n";
  } else {
    std::cout << "count check skipped (needs an analytic descriptor)\n";
  }
  return 0;
}

void add_common_flags(CLI::App* sub, Opts& o) {
  sub->add_option("--config", o.config_path, "JSON config file; flags override");
  sub->add_option("--seed", o.seed, "base random seed");
  sub->add_option("--delta", o.deltas, "depth parameter list")->delimiter(',');
  sub->add_option("--lambda", o.lambdas, "eigenvalue cutoff list")->delimiter(',');
  sub->add_option("--out", o.out_dir, "output directory (default .)");
  sub->add_option("--format", o.format, "row output format: csv or json");
  sub->add_flag("--dry-run", o.dry_run, "print the resolved config and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "coarse nodal counting toolkit\n"
      "Environment: COARSE_NODAL_THREADS caps worker threads."};
  app.require_subcommand(1);
  app.set_version_flag("--version", cnodal::library_version);

  Opts ob, os, om;

  CLI::App* barcode = app.add_subcommand(
      "barcode", "sublevel barcode and deep-count table of a field");
  add_common_flags(barcode, ob);
  barcode->add_option("--field", ob.field_json, "field descriptor JSON");
  barcode->add_flag("--abs", ob.take_abs, "take |f| (applied before --negate)");
  barcode->add_flag("--negate", ob.take_negate, "take -f");
  barcode->add_option("--mult", ob.mult, "sampling multiple of the Nyquist rule");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "randomized count-vs-parameter scaling sweep");
  add_common_flags(sweep, os);
  sweep->add_option("--mode", os.mode,
                    "single|product|bezout|critical|wiggly|sharpness");
  sweep->add_option("--n", os.n, "torus dimension");
  sweep->add_option("--trials", os.trials, "trials per parameter value");
  sweep->add_option("--A", os.A, "bump-scale factor (sharpness)");
  sweep->add_option("--a1", os.a1, "packing density (sharpness)");
  sweep->add_option("--alpha", os.alpha, "envelope power (wiggly)");
  sweep->add_option("--beta", os.beta, "oscillation power (wiggly)");

  CLI::App* mdp = app.add_subcommand(
      "mdp", "adaptive dyadic partition and bar-count certificate");
  add_common_flags(mdp, om);
  mdp->add_option("--field", om.field_json, "field descriptor JSON");
  mdp->add_option("--k", om.k, "smoothness order");
  mdp->add_option("--p", om.p, "integrability exponent (number or 'inf')");
  mdp->add_option("--max-level", om.max_level, "subdivision depth cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : cnodal::exit_input;
  }

  try {
    if (barcode->parsed()) {
      merge_config(barcode, ob);
      return run_barcode(ob);
    }
    if (sweep->parsed()) {
      merge_config(sweep, os);
      return run_sweep(os);
    }
    merge_config(mdp, om);
    return run_mdp(om);
  } catch (const cnodal::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return cnodal::exit_input;
  } catch (const cnodal::resolution_error& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return cnodal::exit_resolution;
  } catch (const cnodal::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cnodal::exit_config;
  } catch (const cnodal::depth_cap_error& e) {
    std::cerr << "depth cap: " << e.what() << "\n";
    return cnodal::exit_depth_cap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
