#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "nct/parallel.hpp"
#include "nct/pipeline.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative thickenings of polynomial charts"};
  app.require_subcommand(1);

  std::string spec_path, target_path, out_path, report_path;
  std::optional<int> truncation;
  int threads = 1;
  app.add_option("--spec", spec_path, "Chart spec JSON file");
  app.add_option("--truncation", truncation, "Tensor-degree truncation; overrides the spec")->check(CLI::Range(0, 14));
  app.add_option("--out", out_path, "Write the artifact here instead of standard output");
  app.add_option("--report", report_path, "Write the identity report here");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

  nct::RunOptions opts;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  add("thicken", "Build the NC-connection");
  add("verify", "Check D^2 = 0 on generators");
  add("lift", "sigma-lift of a polynomial")->add_option("f", opts.args, "Polynomial")->required()->expected(1);
  add("mul", "Product of two sigma-lifts")->add_option("polys", opts.args, "Polynomials f g")->required()->expected(2);
  add("bracket", "Leading term of a commutator of sigma-lifts")->add_option("polys", opts.args, "Polynomials f g")->required()->expected(2);
  CLI::App* dims = add("dims", "Leading-term dimensions on the flat chart");
  dims->add_option("--n", opts.dims_n, "Chart dimension");
  dims->add_option("--max", opts.dims_max, "Largest degree");
  add("module", "Build the module NC-connection");
  add("gauge", "Gauge transform between two charts")->add_option("--target", target_path, "Target chart spec")->required();
  add("koszul", "Koszul dual presentation of an A-infinity algebra");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opts.command = app.get_subcommands().front()->get_name();
  opts.truncation = truncation;
  if (opts.command != "dims") {
    if (spec_path.empty()) {
      std::cerr << "--spec: required for " << opts.command << "\n";
      return 2;
    }
    if (!read_file(spec_path, opts.spec_text)) {
      std::cerr << spec_path << ": cannot read file\n";
      return 2;
    }
  }
  if (!target_path.empty()) {
    std::string text;
    if (!read_file(target_path, text)) {
      std::cerr << target_path << ": cannot read file\n";
      return 2;
    }
    opts.target_text = text;
  }
  nct::set_thread_count(threads);

  nct::RunResult result = nct::run(opts);
  if (!result.message.empty()) std::cerr << result.message << "\n";
  if (!result.artifact.empty()) {
    if (out_path.empty()) {
      std::cout << result.artifact;
    } else if (!write_file(out_path, result.artifact)) {
      std::cerr << out_path << ": cannot write file\n";
      return 2;
    }
  }
  if (!report_path.empty() && !result.report.empty() && !write_file(report_path, result.report)) {
    std::cerr << report_path << ": cannot write file\n";
    return 2;
  }
  return result.exit_code;
}
