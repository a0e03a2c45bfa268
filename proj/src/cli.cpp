#include "idpa/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "idpa/analysis.hpp"
#include "idpa/json_writer.hpp"
#include "idpa/parser.hpp"
#include "idpa/version.hpp"

namespace idpa {

namespace {

struct CliConfig {
  std::string input;
  std::string format = "markdown";
  std::vector<ThreatCategory> fail_on = {ThreatCategory::IS, ThreatCategory::IST,
                                         ThreatCategory::IP};
  Likelihood threshold = Likelihood::certain();
  bool include_mitigated = false;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, const std::string& file,
                       bool as_json, std::ostream& err) {
  if (diagnostics.empty()) {
    return;
  }
  if (!as_json) {
    for (const Diagnostic& d : diagnostics) {
      err << format_diagnostic(d, file) << "\n";
    }
    return;
  }
  JsonValue list = JsonValue::array();
  for (const Diagnostic& d : diagnostics) {
    JsonValue entry = JsonValue::object();
    entry.set("severity",
              JsonValue::string(d.severity == Severity::Error ? "error" : "warning"));
    entry.set("message", JsonValue::string(d.message));
    if (!d.location.empty()) {
      entry.set("location", JsonValue::string(d.location));
    }
    if (d.span) {
      entry.set("line", JsonValue::number(d.span->line));
      entry.set("column", JsonValue::number(d.span->column));
    }
    list.push(std::move(entry));
  }
  err << list.dump();
}

// Parses the file and runs the full pipeline. On error prints diagnostics
// and returns nullopt; warnings are printed but do not block.
std::optional<AnalysisReport> load_and_analyze(const std::string& path, bool json_errors,
                                               std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    if (json_errors) {
      print_diagnostics({{Severity::Error, "cannot read " + path, path, std::nullopt}}, path,
                        true, err);
    } else {
      err << "error: cannot read " << path << "\n";
    }
    return std::nullopt;
  }
  ParseResult parsed = parse(*text);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, path, json_errors, err);
    return std::nullopt;
  }
  AnalysisResult analysis = analyze(*parsed.model);
  std::vector<Diagnostic> all = parsed.diagnostics;
  all.insert(all.end(), analysis.diagnostics.begin(), analysis.diagnostics.end());
  print_diagnostics(all, path, json_errors, err);
  if (!analysis.ok()) {
    return std::nullopt;
  }
  return std::move(*analysis.report);
}

int cmd_validate(const std::string& path, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read " << path << "\n";
    return kExitError;
  }
  ParseResult parsed = parse(*text);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, path, false, err);
    return kExitError;
  }
  std::vector<Diagnostic> all = parsed.diagnostics;
  std::vector<Diagnostic> semantic = validate(*parsed.model);
  all.insert(all.end(), semantic.begin(), semantic.end());
  print_diagnostics(all, path, false, err);
  return has_errors(all) ? kExitError : kExitClean;
}

int cmd_analyze(const CliConfig& config, std::ostream& out, std::ostream& err) {
  bool json = config.format == "json";
  auto report = load_and_analyze(config.input, json, err);
  if (!report) {
    return kExitError;
  }
  if (config.format == "json") {
    out << emit_json(*report);
  } else if (config.format == "csv") {
    out << emit_threat_map(*report, MapFormat::Csv);
  } else {
    out << emit_threat_map(*report, MapFormat::Markdown);
  }

  for (const ReportedThreat& rt : report->threats) {
    const Threat& t = rt.threat;
    bool category_matches =
        std::find(config.fail_on.begin(), config.fail_on.end(), t.category) !=
        config.fail_on.end();
    bool certain_enough = t.likelihood >= config.threshold;
    bool counted = t.status != ThreatStatus::Mitigated || config.include_mitigated;
    if (category_matches && certain_enough && counted) {
      return kExitGated;
    }
  }
  return kExitClean;
}

int cmd_tree(const std::string& path, const std::string& threat, bool list, std::ostream& out,
             std::ostream& err) {
  auto report = load_and_analyze(path, false, err);
  if (!report) {
    return kExitError;
  }
  if (list) {
    for (const ThreatId& id : report->threat_ids()) {
      out << id.value << "\n";
    }
    return kExitClean;
  }
  std::string error;
  auto dot = emit_threat_tree(*report, ThreatId{threat}, &error);
  if (!dot) {
    err << "error: " << error << "\n";
    return kExitError;
  }
  out << *dot;
  return kExitClean;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"idpa — interdependent privacy threat analysis for data-flow models"};
  app.set_version_flag("--version", std::string("idpa ") + kEngineVersion);
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Parse and validate a model file");
  validate_cmd->add_option("file", validate_path, "Model file (.idpa)")->required();

  CliConfig config;
  std::string fail_on_text;
  std::string threshold_text;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Analyze a model and emit the threat report");
  analyze_cmd->add_option("file", config.input, "Model file (.idpa)")->required();
  analyze_cmd->add_option("--format", config.format, "Report format")
      ->check(CLI::IsMember({"markdown", "csv", "json"}))
      ->default_str("markdown");
  analyze_cmd->add_option("--fail-on", fail_on_text,
                          "Comma-separated threat categories that gate the exit code "
                          "(default: IS,IST,IP)");
  analyze_cmd->add_option("--likelihood-threshold", threshold_text,
                          "Gate only on threats with likelihood >= this value (default: 1)");
  analyze_cmd->add_flag("--include-mitigated", config.include_mitigated,
                        "Let mitigated threats gate the exit code too");

  std::string tree_path;
  std::string tree_threat;
  bool tree_list = false;
  CLI::App* tree_cmd = app.add_subcommand("tree", "Emit the threat tree for one threat as DOT");
  tree_cmd->add_option("file", tree_path, "Model file (.idpa)")->required();
  CLI::Option* threat_opt = tree_cmd->add_option("--threat", tree_threat, "Threat id");
  CLI::Option* list_opt = tree_cmd->add_flag("--list", tree_list, "List all threat ids");
  threat_opt->excludes(list_opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  if (validate_cmd->parsed()) {
    return cmd_validate(validate_path, err);
  }
  if (analyze_cmd->parsed()) {
    if (!fail_on_text.empty()) {
      config.fail_on.clear();
      std::string current;
      std::string source = fail_on_text + ",";
      for (char c : source) {
        if (c != ',') {
          current += c;
          continue;
        }
        auto category = threat_category_from_string(current);
        if (!category) {
          err << "error: unknown threat category '" << current << "' (expected IS, IST, IP)\n";
          return kExitError;
        }
        config.fail_on.push_back(*category);
        current.clear();
      }
    }
    if (!threshold_text.empty()) {
      auto threshold = Likelihood::parse(threshold_text);
      if (!threshold) {
        err << "error: invalid likelihood threshold '" << threshold_text
            << "' (expected 0..1 with at most 2 fraction digits)\n";
        return kExitError;
      }
      config.threshold = *threshold;
    }
    return cmd_analyze(config, out, err);
  }
  if (tree_cmd->parsed()) {
    if (!tree_list && tree_threat.empty()) {
      err << "error: tree requires --threat <id> or --list\n";
      return kExitError;
    }
    return cmd_tree(tree_path, tree_threat, tree_list, out, err);
  }
  err << "error: no command given\n";
  return kExitError;
}

}  // namespace idpa
