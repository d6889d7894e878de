#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "adtsched/adt.hpp"
#include "adtsched/export.hpp"
#include "adtsched/generator.hpp"
#include "adtsched/oracle.hpp"
#include "adtsched/parser.hpp"
#include "adtsched/preprocess.hpp"
#include "adtsched/scheduler.hpp"

namespace fs = std::filesystem;
using namespace adtsched;

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitIo = 2;
constexpr int kExitOracleTimeout = 3;

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

// Loads and parses, printing diagnostics with line:col spans on failure.
std::optional<Adt> load_tree(const std::string& path, int& exit_code) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        exit_code = kExitIo;
        return std::nullopt;
    }
    ParseResult result = parse(*text);
    if (!result.ok()) {
        for (const ParseError& e : result.errors)
            std::cerr << path << ':' << e.span.line << ':' << e.span.col << ": "
                      << parse_error_kind_name(e.kind) << ": " << e.message
                      << '\n';
        exit_code = kExitBadInput;
        return std::nullopt;
    }
    return std::move(result.adt);
}

std::optional<long long> parse_target(const std::string& target, int& exit_code) {
    if (target.empty() || target == "min") return std::nullopt;
    try {
        long long v = std::stoll(target);
        if (v <= 0) throw std::invalid_argument("not positive");
        return v;
    } catch (const std::exception&) {
        std::cerr << "error: --target must be 'min' or a positive integer\n";
        exit_code = kExitBadInput;
        throw CLI::RuntimeError(kExitBadInput);
    }
}

std::string scenario_label(const Adt& adt, const DefenceScenario& sc) {
    std::vector<std::string> defences;
    for (const AdtNode& n : adt.nodes())
        if (n.kind == GateKind::Leaf && n.side == Side::Defence)
            defences.push_back(n.id);
    if (defences.empty()) return "default";
    std::string out;
    for (const std::string& d : defences) {
        if (!out.empty()) out += ",";
        out += d + (sc.active.count(d) ? "=on" : "=off");
    }
    return out;
}

std::string variant_label(const Adt& adt, const Variant& v,
                          bool with_choices) {
    std::string label = scenario_label(adt, v.scenario);
    if (with_choices)
        for (const auto& [gate, child] : v.or_choices)
            label += " " + gate + "=" + child;
    return label;
}

// Or-choice suffixes only when one scenario has several variants.
bool needs_choice_suffix(const std::vector<Variant>& variants) {
    std::set<std::string> seen;
    for (const Variant& v : variants) {
        std::string key;
        for (const std::string& d : v.scenario.active) key += d + ";";
        if (!seen.insert(key).second) return true;
    }
    return false;
}

struct FormatSet {
    bool dot = false, csv = false, json = false;
};

FormatSet parse_formats(const std::string& spec, int& exit_code) {
    FormatSet out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "dot") out.dot = true;
        else if (item == "csv") out.csv = true;
        else if (item == "json") out.json = true;
        else if (!item.empty()) {
            std::cerr << "error: unknown format '" << item << "'\n";
            exit_code = kExitBadInput;
            throw CLI::RuntimeError(kExitBadInput);
        }
    }
    return out;
}

fs::path artifact_path(const std::string& input, const std::string& out_dir,
                       const std::string& suffix) {
    fs::path in(input);
    fs::path dir = out_dir.empty() ? in.parent_path() : fs::path(out_dir);
    return dir / (in.stem().string() + suffix);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attack-defence tree scheduling toolkit"};
    app.require_subcommand(1);

    std::string path, target = "min", formats = "json", out_dir;
    int jobs = 1;
    std::uint64_t budget = 10'000'000;

    auto add_common = [&](CLI::App* cmd, bool with_target) {
        cmd->add_option("path", path, "input .adt file")->required();
        if (with_target)
            cmd->add_option("--target", target,
                            "'min' or a time budget in base units");
        cmd->add_option("--jobs", jobs, "worker threads for variants")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", out_dir, "directory for artifacts");
        return cmd;
    };

    CLI::App* c_validate = app.add_subcommand("validate", "check a tree file");
    c_validate->add_option("path", path, "input .adt file")->required();

    CLI::App* c_variants =
        add_common(app.add_subcommand(
                       "variants", "list the preprocessed scheduling variants"),
                   true);
    c_variants->add_option("--format", formats, "dot,csv,json");

    CLI::App* c_schedule = add_common(
        app.add_subcommand("schedule", "compute minimal-agent schedules"), true);
    c_schedule->add_option("--format", formats, "dot,csv,json");

    CLI::App* c_verify = add_common(
        app.add_subcommand("verify",
                           "cross-check the scheduler against exhaustive search"),
        false);
    c_verify->add_option("--budget", budget, "oracle expansion budget");

    CLI::App* c_generate =
        app.add_subcommand("generate", "emit a benchmark tree");
    GeneratorParams gp;
    c_generate->add_option("--depth", gp.depth, "spine length")->required();
    c_generate->add_option("--width", gp.width, "deep leaves")->required();
    c_generate->add_option("--children", gp.children, "fan-out cap")->required();
    c_generate->add_option("--nodes", gp.nodes, "total node count")->required();
    c_generate->add_option("--seed", gp.seed, "recorded in the output header");
    c_generate->add_option("path", path, "output .adt file")->required();

    CLI11_PARSE(app, argc, argv);
    int exit_code = 0;

    try {
        if (c_validate->parsed()) {
            auto text = read_file(path);
            if (!text) {
                std::cerr << "error: cannot read '" << path << "'\n";
                return kExitIo;
            }
            ParseResult result = parse(*text);
            if (!result.ok()) {
                for (const ParseError& e : result.errors)
                    std::cerr << path << ':' << e.span.line << ':' << e.span.col
                              << ": " << parse_error_kind_name(e.kind) << ": "
                              << e.message << '\n';
                return kExitBadInput;
            }
            return 0;
        }

        if (c_generate->parsed()) {
            std::string text;
            try {
                text = generate_tree_text(gp);
            } catch (const UnsatisfiableParams& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitBadInput;
            }
            if (!write_file(path, text)) {
                std::cerr << "error: cannot write '" << path << "'\n";
                return kExitIo;
            }
            return 0;
        }

        auto adt = load_tree(path, exit_code);
        if (!adt) return exit_code;

        if (c_verify->parsed()) {
            SearchOptions opts;
            opts.budget = budget;
            VerificationReport report = verify(*adt, opts);
            std::cout << to_json_report(report);
            if (report.timed_out) return kExitOracleTimeout;
            return report.ok ? 0 : kExitBadInput;
        }

        std::optional<long long> target_units = parse_target(target, exit_code);
        long long unit = time_unit(*adt);
        std::vector<Variant> variants = preprocess(*adt, target_units);
        bool suffix = needs_choice_suffix(variants);

        if (c_variants->parsed()) {
            FormatSet fmt = parse_formats(formats, exit_code);
            int index = 0;
            for (const Variant& v : variants) {
                std::string label = variant_label(*adt, v, suffix);
                if (v.infeasible()) {
                    std::cout << "variant " << label << ": no attack\n";
                } else {
                    std::cout << "variant " << label << ": nodes "
                              << v.dag->size() << ", unit tasks "
                              << v.dag->seq_count() << ", critical path "
                              << critical_path(*v.dag) * unit << "\n";
                    if (fmt.dot) {
                        fs::path p = artifact_path(
                            path, out_dir,
                            "_variant" + std::to_string(index) + ".dot");
                        if (!write_file(p, to_dot(*v.dag))) {
                            std::cerr << "error: cannot write '" << p.string()
                                      << "'\n";
                            return kExitIo;
                        }
                    }
                }
                ++index;
            }
            return 0;
        }

        // schedule
        FormatSet fmt = parse_formats(formats, exit_code);
        std::vector<VariantSchedule> results =
            min_schedule(std::move(variants), unit, jobs);
        int index = 0;
        for (const VariantSchedule& vs : results) {
            std::string label = variant_label(*adt, vs.variant, suffix);
            if (vs.variant.infeasible()) {
                std::cout << "variant " << label << ": no attack\n";
            } else {
                std::cout << "variant " << label << ": time="
                          << vs.schedule->makespan
                          << " agents=" << vs.schedule->agents_used << "\n";
                std::string stem = "_variant" + std::to_string(index);
                if (fmt.dot) {
                    DotOptions opts;
                    opts.show_assignment = true;
                    opts.color_by_agent = true;
                    fs::path p = artifact_path(path, out_dir, stem + ".dot");
                    if (!write_file(p, to_dot(*vs.variant.dag, opts))) {
                        std::cerr << "error: cannot write '" << p.string()
                                  << "'\n";
                        return kExitIo;
                    }
                }
                if (fmt.csv) {
                    fs::path p = artifact_path(path, out_dir, stem + ".csv");
                    if (!write_file(
                            p, to_schedule_csv(*vs.variant.dag, *vs.schedule))) {
                        std::cerr << "error: cannot write '" << p.string()
                                  << "'\n";
                        return kExitIo;
                    }
                }
            }
            ++index;
        }
        if (fmt.json) {
            fs::path p = artifact_path(path, out_dir, "_schedule.json");
            if (!write_file(p, to_json_report(*adt, unit, results))) {
                std::cerr << "error: cannot write '" << p.string() << "'\n";
                return kExitIo;
            }
        }
        return 0;
    } catch (const AllZeroDurations& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}
