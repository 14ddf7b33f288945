// Command-line surface over the library: box construction and validation,
// inequality evaluation, wiring, Fourier analysis, depth-2 search, and CSV
// curve emission. Values print as canonical rational strings unless --float
// is given. Exit codes: 0 success, 1 failed validation or computation,
// 2 usage or input-format error.

#include "nlb/box.hpp"
#include "nlb/curves.hpp"
#include "nlb/error.hpp"
#include "nlb/fourier.hpp"
#include "nlb/inequality.hpp"
#include "nlb/json_io.hpp"
#include "nlb/search.hpp"
#include "nlb/wiring.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace nlb;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Parse, "cannot read file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Parse, "cannot write file " + path);
    out << text;
}

void write_json(const std::string& path, const Json& j) { write_output(path, j.dump(2) + "\n"); }

TripartiteBox load_box(const std::string& path) {
    return box_from_json(parse_json_text(read_input(path)));
}

BellInequality load_inequality(const std::string& name) {
    if (name == "class2") return class2_inequality();
    if (name == "class41") return class41_inequality();
    return inequality_from_json(parse_json_text(read_input(name)));
}

WiringProtocol load_protocol(const std::string& name) {
    if (!name.empty() && (name[0] == '{' || name == "-" ||
                          name.find(".json") != std::string::npos)) {
        std::string text = name[0] == '{' ? name : read_input(name);
        return protocol_from_json(parse_json_text(text));
    }
    return builtin_protocol(name);
}

std::string value_string(const Rational& value, bool as_float) {
    return as_float ? to_float_string(value) : to_string(value);
}

std::pair<Rational, Rational> parse_rational_pair(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) fail(ErrorCode::Parse, "expected lo,hi pair");
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

// ---- box ------------------------------------------------------------------

struct BoxBuildArgs {
    bool ghz = false;
    bool correlated = false;
    int cls = 0;
    std::string parity_poly;
    std::string local_bits;
    std::string noisy_ghz_params;
    std::string noisy_class_params;
    std::string domain = "";
    std::string out = "-";
};

int run_box_build(const BoxBuildArgs& args) {
    int constructors = int(args.ghz) + int(args.correlated) + int(args.cls != 0) +
                       int(!args.parity_poly.empty()) + int(!args.local_bits.empty()) +
                       int(!args.noisy_ghz_params.empty()) + int(!args.noisy_class_params.empty());
    if (constructors != 1) {
        std::cerr << "error: exactly one constructor flag expected\n";
        return 2;
    }
    bool ghz_like = args.ghz || !args.noisy_ghz_params.empty();
    InputDomain domain{args.domain.empty()
                           ? (ghz_like ? DomainKind::EvenParity : DomainKind::Full)
                           : parse_domain_kind(args.domain)};
    TripartiteBox box = [&] {
        if (args.ghz) return ghz_box(domain);
        if (args.correlated) return box_from_parity_poly(parse_gf2_poly("0"), domain);
        if (args.cls != 0) return box_from_parity_poly(class_parity_poly(parse_class_id(args.cls)),
                                                       domain);
        if (!args.parity_poly.empty()) {
            return box_from_parity_poly(parse_gf2_poly(args.parity_poly), domain);
        }
        if (!args.local_bits.empty()) {
            const std::string& bits = args.local_bits;
            if (bits.size() != 6) fail(ErrorCode::Parse, "--local wants six bits, e.g. 010010");
            LocalVertexParams p;
            bool* slots[6] = {&p.i, &p.k, &p.m, &p.n, &p.s, &p.t};
            for (int i = 0; i < 6; ++i) {
                if (bits[std::size_t(i)] != '0' && bits[std::size_t(i)] != '1') {
                    fail(ErrorCode::Parse, "--local bits must be 0/1");
                }
                *slots[i] = bits[std::size_t(i)] == '1';
            }
            return local_vertex(p);
        }
        if (!args.noisy_ghz_params.empty()) {
            auto [eps, delta] = parse_rational_pair(args.noisy_ghz_params);
            return noisy_ghz({eps, delta});
        }
        auto comma = args.noisy_class_params.find(',');
        if (comma == std::string::npos) fail(ErrorCode::Parse, "--noisy-class wants class,delta");
        int cls = std::stoi(args.noisy_class_params.substr(0, comma));
        return noisy_class_box(parse_class_id(cls),
                               parse_rational(args.noisy_class_params.substr(comma + 1)));
    }();
    write_json(args.out, box_to_json(box));
    return 0;
}

// ---- main -----------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"Exact tripartite non-local box toolkit"};
    app.require_subcommand(1);

    // box
    CLI::App* box_cmd = app.add_subcommand("box", "Build and inspect boxes");
    box_cmd->require_subcommand(1);

    BoxBuildArgs build_args;
    CLI::App* box_build = box_cmd->add_subcommand("build", "Construct a built-in box");
    box_build->add_flag("--ghz", build_args.ghz, "GHZ box");
    box_build->add_flag("--correlated", build_args.correlated, "correlated box (parity 0)");
    box_build->add_option("--class", build_args.cls, "class box 44, 45 or 46");
    box_build->add_option("--parity-poly", build_args.parity_poly,
                          "box enforcing a^b^c = poly(x,y,z), e.g. xy+z");
    box_build->add_option("--local", build_args.local_bits,
                          "deterministic vertex, six bits i k m n s t");
    box_build->add_option("--noisy-ghz", build_args.noisy_ghz_params, "eps,delta");
    box_build->add_option("--noisy-class", build_args.noisy_class_params, "class,delta");
    box_build->add_option("--domain", build_args.domain, "full or even-parity");
    box_build->add_option("--out", build_args.out, "output file (- = stdout)");

    std::string validate_box = "-";
    CLI::App* box_validate = box_cmd->add_subcommand("validate", "Check a box JSON file");
    box_validate->add_option("--box", validate_box, "box JSON (- = stdin)");

    std::string restrict_box = "-";
    std::string restrict_domain_name = "even-parity";
    std::string restrict_out = "-";
    CLI::App* box_restrict = box_cmd->add_subcommand("restrict", "Restrict a box's domain");
    box_restrict->add_option("--box", restrict_box, "box JSON (- = stdin)");
    box_restrict->add_option("--domain", restrict_domain_name, "target domain");
    box_restrict->add_option("--out", restrict_out, "output file");

    std::vector<std::string> mix_boxes;
    std::string mix_weights;
    std::string mix_out = "-";
    CLI::App* box_mix = box_cmd->add_subcommand("mix", "Convex combination of boxes");
    box_mix->add_option("--box", mix_boxes, "box JSON files (repeat per component)");
    box_mix->add_option("--weights", mix_weights, "comma-separated rational weights");
    box_mix->add_option("--out", mix_out, "output file");

    // ineq
    CLI::App* ineq_cmd = app.add_subcommand("ineq", "Bell inequality evaluation");
    std::string ineq_name = "class41";
    std::string ineq_box = "-";
    bool ineq_float = false;
    CLI::App* ineq_eval = ineq_cmd->add_subcommand("eval", "Evaluate an inequality on a box");
    ineq_eval->add_option("--ineq", ineq_name, "class2, class41 or a JSON file");
    ineq_eval->add_option("--box", ineq_box, "box JSON (- = stdin)");
    ineq_eval->add_flag("--float", ineq_float, "print a float instead of a rational");

    // wire
    CLI::App* wire_cmd = app.add_subcommand("wire", "Run a wiring protocol");
    std::string wire_protocol;
    std::vector<std::string> wire_boxes;
    std::string wire_ghz_noise;
    std::string wire_class_noise;
    std::string wire_out = "-";
    CLI::App* wire_run = wire_cmd->add_subcommand("run", "Wire boxes and print the result");
    wire_run->add_option("--protocol", wire_protocol,
                         "protocol-1..5, ndpN, parity-SSST, or a JSON file")->required();
    wire_run->add_option("--box", wire_boxes, "box JSON per copy (repeat)");
    wire_run->add_option("--ghz-noise", wire_ghz_noise, "eps,delta: noisy GHZ copies");
    wire_run->add_option("--class-noise", wire_class_noise, "class,delta: noisy class copies");
    wire_run->add_option("--out", wire_out, "output file");

    // fourier
    CLI::App* fourier_cmd = app.add_subcommand("fourier", "Boolean-function Fourier analysis");
    int fourier_n = 2;
    std::string fourier_f, fourier_fa, fourier_fb, fourier_fc;
    std::string fourier_eps = "0", fourier_delta = "0";
    bool fourier_float = false;
    CLI::App* fourier_spectrum = fourier_cmd->add_subcommand("spectrum", "Exact coefficients");
    fourier_spectrum->add_option("--n", fourier_n, "arity")->required();
    fourier_spectrum->add_option("--f", fourier_f, "truth table, packed hex")->required();
    CLI::App* fourier_value =
        fourier_cmd->add_subcommand("value", "Non-adaptive GHZ protocol value and bound");
    fourier_value->add_option("--n", fourier_n, "arity / copies")->required();
    fourier_value->add_option("--fa", fourier_fa, "final table, packed hex")->required();
    fourier_value->add_option("--fb", fourier_fb, "final table, packed hex")->required();
    fourier_value->add_option("--fc", fourier_fc, "final table, packed hex")->required();
    fourier_value->add_option("--eps", fourier_eps, "noise bias on row 000")->required();
    fourier_value->add_option("--delta", fourier_delta, "noise bias elsewhere")->required();
    fourier_value->add_flag("--float", fourier_float, "print floats");
    CLI::App* fourier_bound = fourier_cmd->add_subcommand("bound", "max_k |eps^k - 3 delta^k|");
    fourier_bound->add_option("--n", fourier_n, "maximal power")->required();
    fourier_bound->add_option("--eps", fourier_eps)->required();
    fourier_bound->add_option("--delta", fourier_delta)->required();
    fourier_bound->add_flag("--float", fourier_float, "print a float");

    // search
    CLI::App* search_cmd = app.add_subcommand("search", "Exhaustive depth-2 protocol search");
    int search_class = 0;
    bool search_adaptive = false;
    std::string search_finals;
    bool search_abs = false;
    std::size_t search_top = 0;
    int search_threads = 0;
    std::string search_engine = "auto";
    std::string search_out = "-";
    bool search_ghz = false;
    std::string search_eps = "3/4", search_delta = "1/4";
    std::string search_policy = "skip";
    CLI::App* search_depth2 = search_cmd->add_subcommand("depth2", "Sweep all depth-2 protocols");
    search_depth2->add_option("--class", search_class, "class box 44, 45 or 46");
    search_depth2->add_flag("--adaptive", search_adaptive, "all 16 stage tables per party");
    search_depth2->add_option("--finals", search_finals,
                              "parity (16 affine finals), all (256), or xor (output parity)");
    search_depth2->add_flag("--abs", search_abs, "rank by |V'| against |V|");
    search_depth2->add_option("--top", search_top, "keep only the best entries");
    search_depth2->add_option("--threads", search_threads, "worker count (0 = auto)");
    search_depth2->add_option("--engine", search_engine, "auto, kernel or reference");
    search_depth2->add_option("--out", search_out, "output file");
    search_depth2->add_flag("--ghz", search_ghz, "search two noisy GHZ copies instead");
    search_depth2->add_option("--eps", search_eps, "GHZ noise bias on row 000");
    search_depth2->add_option("--delta", search_delta, "GHZ noise bias elsewhere");
    search_depth2->add_option("--policy", search_policy,
                              "skip or sink for domain-leaving candidates (GHZ only)");

    // curve
    CLI::App* curve_cmd = app.add_subcommand("curve", "CSV data for the closed-form plots");
    std::string curve_target = "class-curves";
    int curve_resolution = 33;
    std::string curve_eps_range, curve_delta_range;
    bool curve_abs = false;
    bool curve_float = false;
    std::string curve_out = "-";
    CLI::App* curve_emit_cmd = curve_cmd->add_subcommand("emit", "Emit a CSV document");
    curve_emit_cmd->add_option("--target", curve_target, "ghz-region or class-curves");
    curve_emit_cmd->add_option("--resolution", curve_resolution, "grid points per axis");
    curve_emit_cmd->add_option("--eps-range", curve_eps_range, "lo,hi (ghz-region)");
    curve_emit_cmd->add_option("--delta-range", curve_delta_range, "lo,hi");
    curve_emit_cmd->add_flag("--abs", curve_abs, "distills column compares magnitudes");
    curve_emit_cmd->add_flag("--float", curve_float, "render floats");
    curve_emit_cmd->add_option("--out", curve_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (box_build->parsed()) return run_box_build(build_args);

    if (box_validate->parsed()) {
        ValidationReport report = validate(load_box(validate_box));
        write_json("-", validation_to_json(report));
        return report.ok() ? 0 : 1;
    }

    if (box_restrict->parsed()) {
        TripartiteBox box = load_box(restrict_box);
        InputDomain target{parse_domain_kind(restrict_domain_name)};
        write_json(restrict_out, box_to_json(restrict_domain(box, target)));
        return 0;
    }

    if (box_mix->parsed()) {
        std::vector<TripartiteBox> components;
        for (const std::string& path : mix_boxes) components.push_back(load_box(path));
        std::vector<Rational> weights;
        std::stringstream ss(mix_weights);
        std::string item;
        while (std::getline(ss, item, ',')) weights.push_back(parse_rational(item));
        write_json(mix_out, box_to_json(mix(weights, components)));
        return 0;
    }

    if (ineq_eval->parsed()) {
        Rational value = eval_inequality(load_box(ineq_box), load_inequality(ineq_name));
        std::cout << value_string(value, ineq_float) << "\n";
        return 0;
    }

    if (wire_run->parsed()) {
        WiringProtocol protocol = load_protocol(wire_protocol);
        std::vector<TripartiteBox> copies;
        int sources = int(!wire_boxes.empty()) + int(!wire_ghz_noise.empty()) +
                      int(!wire_class_noise.empty());
        if (sources != 1) {
            std::cerr << "error: give --box copies, --ghz-noise, or --class-noise\n";
            return 2;
        }
        if (!wire_boxes.empty()) {
            for (const std::string& path : wire_boxes) copies.push_back(load_box(path));
            if (copies.size() == 1 && protocol.depth > 1) {
                copies.assign(std::size_t(protocol.depth), copies[0]);
            }
        } else if (!wire_ghz_noise.empty()) {
            auto [eps, delta] = parse_rational_pair(wire_ghz_noise);
            copies.assign(std::size_t(protocol.depth), noisy_ghz({eps, delta}));
        } else {
            auto comma = wire_class_noise.find(',');
            if (comma == std::string::npos) fail(ErrorCode::Parse, "--class-noise wants class,delta");
            TripartiteBox box = noisy_class_box(parse_class_id(std::stoi(wire_class_noise.substr(0, comma))),
                                                parse_rational(wire_class_noise.substr(comma + 1)));
            copies.assign(std::size_t(protocol.depth), box);
        }
        write_json(wire_out, box_to_json(wire(protocol, copies)));
        return 0;
    }

    if (fourier_spectrum->parsed()) {
        BooleanFunction f = BooleanFunction::from_packed(fourier_n,
                                                         encoding_from_hex(fourier_f));
        FourierSpectrum spec = spectrum(f);
        Json coeffs = Json::object();
        for (std::uint32_t z = 0; z < spec.size(); ++z) {
            std::string mask;
            for (int bit = fourier_n - 1; bit >= 0; --bit) mask += char('0' + ((z >> bit) & 1));
            coeffs[mask] = to_string(spec.coefficient(z));
        }
        write_json("-", Json{{"n", fourier_n}, {"coefficients", coeffs}});
        return 0;
    }

    if (fourier_value->parsed()) {
        BooleanFunction fa = BooleanFunction::from_packed(fourier_n, encoding_from_hex(fourier_fa));
        BooleanFunction fb = BooleanFunction::from_packed(fourier_n, encoding_from_hex(fourier_fb));
        BooleanFunction fc = BooleanFunction::from_packed(fourier_n, encoding_from_hex(fourier_fc));
        Rational eps = parse_rational(fourier_eps);
        Rational delta = parse_rational(fourier_delta);
        std::cout << value_string(nonadaptive_value(fa, fb, fc, eps, delta), fourier_float) << "\n"
                  << value_string(parity_bound(eps, delta, fourier_n), fourier_float) << "\n";
        return 0;
    }

    if (fourier_bound->parsed()) {
        Rational bound = parity_bound(parse_rational(fourier_eps), parse_rational(fourier_delta),
                                      fourier_n);
        std::cout << value_string(bound, fourier_float) << "\n";
        return 0;
    }

    if (search_depth2->parsed()) {
        SearchEngine engine = search_engine == "kernel" ? SearchEngine::Kernel
                              : search_engine == "reference" ? SearchEngine::Reference
                                                             : SearchEngine::Auto;
        if (search_ghz) {
            SearchSpaceSpec space =
                ghz_parity_space(search_adaptive ? WiringMode::Adaptive : WiringMode::NonAdaptive);
            if (search_finals == "parity") {
                space.a.finals.reset();
                space.b.finals.reset();
                space.c.finals.reset();
            } else if (search_finals == "all") {
                space.a.finals.reset();
                space.b.finals.reset();
                space.c.finals.reset();
                space.final_mode = FinalMode::All;
            } else if (!search_finals.empty() && search_finals != "xor") {
                std::cerr << "error: --finals must be xor, parity or all\n";
                return 2;
            }
            GhzSearchOptions opts;
            opts.engine = engine;
            opts.threads = search_threads;
            if (search_policy == "sink") {
                opts.policy = DomainPolicy::Sink;
            } else if (search_policy != "skip") {
                std::cerr << "error: --policy must be skip or sink\n";
                return 2;
            }
            GhzSearchResult result = ghz_search_depth2(
                {parse_rational(search_eps), parse_rational(search_delta)}, space, opts);
            write_json(search_out, ghz_result_to_json(result));
            return 0;
        }
        if (search_class == 0) {
            std::cerr << "error: --class is required without --ghz\n";
            return 2;
        }
        SearchSpaceSpec space;
        space.wiring_mode = search_adaptive ? WiringMode::Adaptive : WiringMode::NonAdaptive;
        if (search_finals == "all") {
            space.final_mode = FinalMode::All;
            std::cerr << "warning: the all-finals space is evaluated by the reference engine "
                         "and can take hours\n";
        } else if (!search_finals.empty() && search_finals != "parity") {
            std::cerr << "error: --finals must be parity or all for class search\n";
            return 2;
        }
        SearchOptions opts;
        opts.engine = engine;
        opts.absolute_gain = search_abs;
        opts.threads = search_threads;
        if (search_top > 0) opts.top = search_top;
        SearchReport report = search_report(parse_class_id(search_class), space, opts);
        write_json(search_out, report_to_json(report));
        return 0;
    }

    if (curve_emit_cmd->parsed()) {
        CurveSpec spec;
        if (curve_target == "ghz-region") {
            spec.target = CurveTarget::GhzDepth2Region;
        } else if (curve_target == "class-curves") {
            spec.target = CurveTarget::ClassProtocolCurves;
        } else {
            std::cerr << "error: --target must be ghz-region or class-curves\n";
            return 2;
        }
        spec.resolution = curve_resolution;
        spec.absolute = curve_abs;
        spec.float_output = curve_float;
        if (!curve_eps_range.empty()) {
            auto [lo, hi] = parse_rational_pair(curve_eps_range);
            spec.eps_range = {lo, hi};
        }
        if (!curve_delta_range.empty()) {
            auto [lo, hi] = parse_rational_pair(curve_delta_range);
            if (spec.target == CurveTarget::GhzDepth2Region) {
                spec.ghz_delta_range = {lo, hi};
            } else {
                spec.delta_range = {lo, hi};
            }
        }
        write_output(curve_out, curve_emit(spec));
        return 0;
    }

    std::cerr << "error: no subcommand executed\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NlbError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Parse ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
