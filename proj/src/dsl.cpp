#include "gapkit/dsl.hpp"

#include "gapkit/core_sets.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace gapkit {

namespace {

[[noreturn]] void parse_error(const std::string& text, std::size_t pos, const std::string& expected) {
    std::ostringstream os;
    os << "set DSL parse error at position " << pos << " in \"" << text
       << "\": expected " << expected;
    throw Error(os.str());
}

double parse_double(const std::string& text, const std::string& value, std::size_t pos) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        parse_error(text, pos, "a decimal number, got \"" + value + "\"");
    return out;
}

long long parse_int(const std::string& text, const std::string& value, std::size_t pos) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        parse_error(text, pos, "an integer, got \"" + value + "\"");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

// Splits "k1=v1,k2=v2,..." at top level; parentheses protect nested commas.
std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>>
split_args(const std::string& text, const std::string& args, std::size_t base_pos) {
    std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= args.size(); ++i) {
        if (i < args.size() && args[i] == '(') ++depth;
        if (i < args.size() && args[i] == ')') --depth;
        if (i == args.size() || (args[i] == ',' && depth == 0)) {
            std::string piece = args.substr(start, i - start);
            if (!trim(piece).empty()) {
                auto eq = piece.find('=');
                if (eq == std::string::npos)
                    parse_error(text, base_pos + start, "key=value");
                std::string key = trim(piece.substr(0, eq));
                std::string val = trim(piece.substr(eq + 1));
                if (val.size() >= 2 && val.front() == '(' && val.back() == ')')
                    val = val.substr(1, val.size() - 2);
                out.emplace_back(key, std::make_pair(val, base_pos + start));
            }
            start = i + 1;
        }
    }
    if (depth != 0) parse_error(text, base_pos + args.size(), "balanced parentheses");
    return out;
}

std::vector<long long> parse_int_list(const std::string& text, const std::string& value,
                                      std::size_t pos) {
    std::vector<long long> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= value.size(); ++i) {
        if (i == value.size() || value[i] == '|') {
            std::string piece = trim(value.substr(start, i - start));
            if (!piece.empty()) out.push_back(parse_int(text, piece, pos));
            start = i + 1;
        }
    }
    return out;
}

Generator parse_spec(const std::string& text, const std::string& spec, std::size_t base_pos);

Generator parse_lattice_minus(const std::string& text,
                              const std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>>& kv) {
    double alpha = 0.0, shift = 0.0, thin = 0.0;
    bool have_alpha = false;
    std::uint64_t seed = 0;
    long long modulus = 0;
    std::vector<long long> residues, indices;
    for (const auto& [key, vp] : kv) {
        const auto& [val, pos] = vp;
        if (key == "alpha") {
            alpha = parse_double(text, val, pos);
            have_alpha = true;
        } else if (key == "shift") {
            shift = parse_double(text, val, pos);
        } else if (key == "residues") {
            auto mod_at = val.find(" mod ");
            if (mod_at == std::string::npos)
                parse_error(text, pos, "\"<r1>[|r2...] mod <m>\"");
            residues = parse_int_list(text, trim(val.substr(0, mod_at)), pos);
            modulus = parse_int(text, trim(val.substr(mod_at + 5)), pos);
            if (modulus <= 0) parse_error(text, pos, "a positive modulus");
        } else if (key == "indices") {
            indices = parse_int_list(text, val, pos);
        } else if (key == "thin") {
            thin = parse_double(text, val, pos);
            if (thin < 0.0 || thin >= 1.0) parse_error(text, pos, "thin probability in [0,1)");
        } else if (key == "seed") {
            seed = static_cast<std::uint64_t>(parse_int(text, val, pos));
        } else {
            parse_error(text, pos, "one of alpha/shift/residues/indices/thin/seed, got \"" + key + "\"");
        }
    }
    if (!have_alpha || alpha <= 0.0)
        parse_error(text, 0, "a positive alpha");
    Generator g;
    g.kind = GenKind::LatticeMinus;
    g.alpha = alpha;
    g.shift = shift;
    g.modulus = modulus;
    g.residues = std::move(residues);
    g.indices = std::move(indices);
    g.thin_prob = thin;
    g.thin_seed = seed;
    for (long long& r : g.residues) r = ((r % std::max<long long>(modulus, 1)) + modulus) % std::max<long long>(modulus, 1);
    std::sort(g.residues.begin(), g.residues.end());
    std::sort(g.indices.begin(), g.indices.end());
    return g;
}

Generator parse_spec(const std::string& text, const std::string& spec, std::size_t base_pos) {
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    std::size_t args_pos = base_pos + (colon == std::string::npos ? spec.size() : colon + 1);

    if (kind == "lattice") {
        auto kv = split_args(text, args, args_pos);
        double alpha = 0.0, shift = 0.0;
        bool have_alpha = false;
        for (const auto& [key, vp] : kv) {
            const auto& [val, pos] = vp;
            if (key == "alpha") {
                alpha = parse_double(text, val, pos);
                have_alpha = true;
            } else if (key == "shift") {
                shift = parse_double(text, val, pos);
            } else {
                parse_error(text, pos, "one of alpha/shift, got \"" + key + "\"");
            }
        }
        if (!have_alpha || alpha <= 0.0) parse_error(text, args_pos, "a positive alpha");
        return lattice_generator(alpha, shift);
    }
    if (kind == "lattice-minus") {
        return parse_lattice_minus(text, split_args(text, args, args_pos));
    }
    if (kind == "explicit") {
        Generator g = explicit_generator();
        return g;
    }
    if (kind == "file") {
        Generator g = explicit_generator();
        return g;
    }
    if (kind == "perturb") {
        auto kv = split_args(text, args, args_pos);
        Generator g;
        g.kind = GenKind::Perturbed;
        bool have_base = false, have_delta = false, have_alpha = false;
        for (const auto& [key, vp] : kv) {
            const auto& [val, pos] = vp;
            if (key == "base") {
                g.base = std::make_shared<Generator>(parse_spec(text, val, pos));
                have_base = true;
            } else if (key == "delta") {
                g.delta = parse_double(text, val, pos);
                have_delta = true;
            } else if (key == "mode") {
                if (val == "snap") g.snap = true;
                else if (val == "random") g.snap = false;
                else parse_error(text, pos, "mode snap or random");
            } else if (key == "alpha") {
                g.snap_alpha = parse_double(text, val, pos);
                have_alpha = true;
            } else if (key == "seed") {
                g.seed = static_cast<std::uint64_t>(parse_int(text, val, pos));
            } else {
                parse_error(text, pos, "one of base/delta/mode/alpha/seed, got \"" + key + "\"");
            }
        }
        if (!have_base) parse_error(text, args_pos, "a base= sub-spec");
        if (!have_delta || g.delta <= 0.0) parse_error(text, args_pos, "a positive delta");
        if (!have_alpha || g.snap_alpha <= 0.0) parse_error(text, args_pos, "a positive alpha");
        return g;
    }
    parse_error(text, base_pos, "a set kind (lattice, lattice-minus, file, perturb, explicit)");
}

} // namespace

Generator parse_set_dsl(const std::string& text) {
    if (trim(text).empty()) parse_error(text, 0, "a nonempty set spec");
    return parse_spec(text, trim(text), 0);
}

std::string format_set_dsl(const Generator& gen) {
    std::ostringstream os;
    os.precision(17);
    switch (gen.kind) {
        case GenKind::Lattice:
            os << "lattice:alpha=" << gen.alpha;
            if (gen.shift != 0.0) os << ",shift=" << gen.shift;
            break;
        case GenKind::LatticeMinus: {
            os << "lattice-minus:alpha=" << gen.alpha;
            if (gen.shift != 0.0) os << ",shift=" << gen.shift;
            if (gen.modulus > 0) {
                os << ",residues=";
                for (std::size_t i = 0; i < gen.residues.size(); ++i)
                    os << (i ? "|" : "") << gen.residues[i];
                os << " mod " << gen.modulus;
            }
            if (!gen.indices.empty()) {
                os << ",indices=";
                for (std::size_t i = 0; i < gen.indices.size(); ++i)
                    os << (i ? "|" : "") << gen.indices[i];
            }
            if (gen.thin_prob > 0.0)
                os << ",thin=" << gen.thin_prob << ",seed=" << gen.thin_seed;
            break;
        }
        case GenKind::Perturbed:
            os << "perturb:base=(" << (gen.base ? format_set_dsl(*gen.base) : "explicit:")
               << "),delta=" << gen.delta << ",mode=" << (gen.snap ? "snap" : "random")
               << ",alpha=" << gen.snap_alpha;
            if (gen.seed != 0) os << ",seed=" << gen.seed;
            break;
        default:
            os << "explicit:";
            break;
    }
    return os.str();
}

DiscreteSet set_from_dsl(const std::string& text, double radius) {
    std::string spec = trim(text);
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    if (kind == "file") {
        DiscreteSet s = load_points(spec.substr(colon + 1));
        if (radius > s.window_radius + kPointTol)
            throw Error("outside truncation: file set smaller than requested radius");
        return s;
    }
    if (kind == "explicit") {
        std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
        std::vector<double> pts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= args.size(); ++i) {
            if (i == args.size() || args[i] == ',') {
                std::string piece = trim(args.substr(start, i - start));
                if (!piece.empty()) pts.push_back(parse_double(text, piece, start));
                start = i + 1;
            }
        }
        std::sort(pts.begin(), pts.end());
        double r = radius;
        for (double p : pts) r = std::max(r, std::abs(p));
        return make_set(std::move(pts), explicit_generator(), r);
    }
    return materialize(parse_set_dsl(spec), radius);
}

} // namespace gapkit
