// Command-line front end. Machine-readable JSON lines go to standard output,
// human summaries to standard error, so pipelines never have to strip the
// chatter. Exit codes: 0 success, 1 verification failure, 2 bad input,
// 3 resource budget exceeded.

#include <CLI11.hpp>

#include "betaifs/betaifs.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace betaifs;
using Json = nlohmann::ordered_json;

void emit(const Json& line) { std::cout << line.dump() << "\n"; }

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    parts.push_back(current);
    return parts;
}

RationalInterval parse_interval(const std::string& text) {
    const std::vector<std::string> parts = split_list(text, ',');
    if (parts.size() != 2) {
        throw input_error("interval must be two rationals \"lo,hi\"");
    }
    return {parse_rational(parts[0]), parse_rational(parts[1])};
}

AlgebraicReal parse_base(const std::string& minpoly, const std::string& interval) {
    return make_algebraic_real(parse_polynomial(minpoly), parse_interval(interval));
}

// Translation parameter forms: "p/q" exact rational, "poly:NUM/DEN" exact
// ratio of base polynomials, "cf:e0,e1,..." the exact value of the finite
// continued fraction with power elements base^e.
ParamValue parse_param(const AlgebraicReal& base, const std::string& text) {
    if (text.rfind("poly:", 0) == 0) {
        const std::string body = text.substr(5);
        const std::size_t slash = body.find('/');
        if (slash == std::string::npos) {
            throw input_error("poly parameter needs the form poly:NUM/DEN");
        }
        BetaPolynomial num(base, parse_polynomial(body.substr(0, slash)));
        BetaPolynomial den(base, parse_polynomial(body.substr(slash + 1)));
        return ParamValue::exact(BetaRational(std::move(num), std::move(den)));
    }
    if (text.rfind("cf:", 0) == 0) {
        std::vector<BigInt> exps;
        for (const std::string& part : split_list(text.substr(3), ',')) {
            if (part.empty()) throw input_error("cf parameter has an empty element");
            exps.emplace_back(part);
        }
        const CFExponents cf(base, std::move(exps));
        const std::vector<ConvergentPair> pairs = convergents(cf);
        return ParamValue::exact(convergent_value(pairs.back()));
    }
    const Rational r = parse_rational(text);
    BetaPolynomial num(base, IntPolynomial::constant(numerator(r)));
    BetaPolynomial den(base, IntPolynomial::constant(denominator(r)));
    return ParamValue::exact(BetaRational(std::move(num), std::move(den)));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trimmed(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const std::size_t last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

// "geom:r", "superexp:r", "factorial", "table:a,b,...", or "file:PATH" where
// the file holds any of the former.
EpsilonSequence parse_epsilon_spec(const std::string& text) {
    if (text.rfind("file:", 0) == 0) {
        const std::string body = trimmed(read_file(text.substr(5)));
        if (body.rfind("file:", 0) == 0) {
            throw input_error("epsilon file must not chain to another file");
        }
        return EpsilonSequence::parse(body);
    }
    return EpsilonSequence::parse(text);
}

std::string magnitude_text(const Magnitude& m) {
    if (m.is_exact()) return format_rational(m.exact_value());
    return "2^[" + m.log2_lo().str() + "," + m.log2_hi().str() + "]";
}

// Table cells stay readable: exact values too long to scan are shown as the
// power of two just below them.
std::string magnitude_brief(const Magnitude& m) {
    const std::string full = magnitude_text(m);
    if (full.size() <= 40) return full;
    if (m.is_exact()) return "~2^" + floor_log2(m.exact_value()).str();
    return "~2^" + m.log2_lo().str();
}

std::string poly_text(const BetaPolynomial& p) { return format_polynomial(p.to_dense()); }

Json word_json(const Word& w) {
    Json arr = Json::array();
    for (int letter : w.letters) arr.push_back(letter);
    return arr;
}

std::string word_text(const Word& w) {
    std::string out;
    for (int letter : w.letters) out += static_cast<char>('0' + letter);
    return out;
}

int run_synthesize(const std::string& minpoly, const std::string& interval,
                   const std::string& eps_spec, unsigned depth, const std::string& out_path) {
    const AlgebraicReal base = parse_base(minpoly, interval);
    const EpsilonSequence eps = parse_epsilon_spec(eps_spec);
    const SynthesisCertificate cert = synthesize(base, eps, depth);

    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw input_error("cannot write " + out_path);
        out << write_certificate(cert);
    }

    std::cerr << "  k          s-exp          t-exp              N              M   c\n";
    for (std::size_t k = 1; k <= cert.depth(); ++k) {
        Json line{{"k", k},
                  {"s_exponent", cert.s_exponents[k - 1].str()},
                  {"t_exponent", cert.t_exponents[k - 1].str()},
                  {"N", cert.levels[k - 1].N.str()},
                  {"M", cert.levels[k - 1].M.str()}};
        std::string c_brief = "-";
        if (k < cert.depth()) {
            line["c"] = magnitude_text(cert.separations[k - 1].c);
            c_brief = magnitude_brief(cert.separations[k - 1].c);
        } else {
            line["c"] = nullptr;
        }
        emit(line);
        std::fprintf(stderr, "%3zu %14s %14s %14s %14s   %s\n", k,
                     cert.s_exponents[k - 1].str().c_str(),
                     cert.t_exponents[k - 1].str().c_str(), cert.levels[k - 1].N.str().c_str(),
                     cert.levels[k - 1].M.str().c_str(), c_brief.c_str());
    }
    emit(Json{{"certificate", out_path},
              {"depth", cert.depth()},
              {"checks", cert.checks.size()}});
    std::cerr << "wrote " << out_path << " (" << cert.checks.size() << " recorded checks)\n";
    return 0;
}

int run_verify(const std::string& cert_path, unsigned brute_max,
               const std::string& csv_path) {
    const SynthesisCertificate cert = read_certificate(read_file(cert_path));
    VerifyOptions options;
    options.brute_n_max = brute_max;
    const VerifyReport report = verify_certificate(cert, options);

    for (const VerifyRow& row : report.rows) {
        emit(Json{{"kind", row.kind},
                  {"k", row.k},
                  {"n", row.n.str()},
                  {"lhs", row.lhs},
                  {"rhs", row.rhs},
                  {"pass", row.pass}});
    }

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw input_error("cannot write " + csv_path);
        csv << "n,delta_upper,epsilon_n,source\n";
        for (const VerifyRow& row : report.rows) {
            std::string source;
            if (row.kind == "cover-initial") {
                source = "initial";
            } else if (row.kind.rfind("cover-s", 0) == 0) {
                source = "s-side";
            } else if (row.kind.rfind("cover-t", 0) == 0) {
                source = "t-side";
            } else if (row.kind == "brute-delta") {
                source = "brute";
            } else {
                continue;
            }
            std::string delta_upper;
            std::string epsilon_n;
            if (source == "brute") {
                delta_upper = row.lhs;
                epsilon_n = row.rhs;
            } else {
                delta_upper = "2^-" + row.rhs;
                // Exact epsilon while it is cheap to materialize; past the
                // bit budget the certified dyadic bound keeps rows short.
                const BigInt need(row.lhs);
                epsilon_n = need <= BigInt(kSynthesisExponentBitCap)
                                ? format_rational(cert.epsilon.value_at(row.n))
                                : "2^-" + row.lhs;
            }
            csv << row.n.str() << "," << delta_upper << "," << epsilon_n << "," << source
                << "\n";
        }
    }

    if (report.pass) {
        std::cerr << "verification passed (" << report.rows.size() << " rows)\n";
        return 0;
    }
    std::cerr << "verification FAILED: first failing check " << report.first_failure << "\n";
    return 1;
}

int run_delta(const std::string& minpoly, const std::string& interval, const std::string& s,
              const std::string& t, unsigned n, unsigned cap) {
    const AlgebraicReal base = parse_base(minpoly, interval);
    const IFSParams params(base, parse_param(base, s), parse_param(base, t));
    const DeltaResult dr = delta_n(params, n, cap);
    emit(Json{{"n", n},
              {"delta_lo", format_rational(dr.value.lo)},
              {"delta_hi", format_rational(dr.value.hi)},
              {"exact", dr.exact},
              {"witness_a", word_json(dr.witness_a)},
              {"witness_b", word_json(dr.witness_b)}});
    if (dr.exact && dr.value.lo == dr.value.hi) {
        std::cerr << "delta_" << n << " = " << format_rational(dr.value.lo) << " between words "
                  << word_text(dr.witness_a) << " and " << word_text(dr.witness_b) << "\n";
    } else {
        std::cerr << "delta_" << n << " in [" << format_rational(dr.value.lo) << ", "
                  << format_rational(dr.value.hi) << "] between words "
                  << word_text(dr.witness_a) << " and " << word_text(dr.witness_b) << "\n";
    }
    return 0;
}

unsigned overlap_cap_from_env() {
    const char* text = std::getenv("OVERLAP_ENUM_CAP");
    if (text == nullptr) return kOverlapLevelCap;
    char* end = nullptr;
    const unsigned long value = std::strtoul(text, &end, 10);
    if (end == text || *end != '\0' || value == 0 || value > 64) {
        throw input_error("OVERLAP_ENUM_CAP must be a positive integer (got \"" +
                          std::string(text) + "\")");
    }
    return static_cast<unsigned>(value);
}

int run_overlaps(const std::string& minpoly, const std::string& interval, const std::string& s,
                 const std::string& t, unsigned max_n) {
    const AlgebraicReal base = parse_base(minpoly, interval);
    const IFSParams params(base, parse_param(base, s), parse_param(base, t));
    const std::vector<CollisionRecord> hits =
        find_exact_overlaps(params, max_n, overlap_cap_from_env());
    const std::optional<Rational> rational_base = base.exact_value();
    for (const CollisionRecord& hit : hits) {
        const OverlapRelation rel = overlap_relation(params, hit.a, hit.b);
        Json line{{"level", hit.level},
                  {"a", word_json(hit.a)},
                  {"b", word_json(hit.b)},
                  {"A", poly_text(rel.A)},
                  {"B", poly_text(rel.B)},
                  {"C", poly_text(rel.C)}};
        if (rational_base) {
            // Polynomial coefficients are only canonical modulo the base's
            // minimal polynomial; the evaluated relation is what a reader
            // checks against s and t.
            line["values"] = Json{{"A", format_rational(rel.A.to_dense().eval(*rational_base))},
                                  {"B", format_rational(rel.B.to_dense().eval(*rational_base))},
                                  {"C", format_rational(rel.C.to_dense().eval(*rational_base))}};
        }
        if (rel.solved) {
            line["solved"] = Json{{"f", poly_text(rel.solved->f)},
                                  {"g", poly_text(rel.solved->g)},
                                  {"h", poly_text(rel.solved->h)}};
        } else {
            line["solved"] = nullptr;
        }
        emit(line);
    }
    if (hits.empty()) {
        std::cerr << "no exact collisions up to level " << max_n << "\n";
    } else {
        std::cerr << hits.size() << " collision" << (hits.size() == 1 ? "" : "s")
                  << " up to level " << max_n << "\n";
    }
    return 0;
}

int run_garsia(const std::string& minpoly, const std::string& interval) {
    const AlgebraicReal base = parse_base(minpoly, interval);
    const GarsiaConstant gc = garsia_constant(base);
    emit(Json{{"M", gc.M},
              {"d", gc.d},
              {"landau", format_rational(gc.landau)},
              {"beta_low", format_rational(gc.beta_low)}});
    std::cerr << "M=" << gc.M << " d=" << gc.d << " landau=" << format_rational(gc.landau)
              << " base>=" << format_rational(gc.beta_low) << "\n";
    return 0;
}

int run_cf(const std::string& minpoly, const std::string& interval,
           const std::string& exponents) {
    const AlgebraicReal base = parse_base(minpoly, interval);
    std::vector<BigInt> exps;
    for (const std::string& part : split_list(exponents, ',')) {
        if (part.empty()) throw input_error("exponent list has an empty element");
        exps.emplace_back(part);
    }
    const CFExponents cf(base, std::move(exps));
    const std::vector<ConvergentPair> pairs = convergents(cf);
    const std::vector<GrowthRow> growth = check_irrationality_growth(cf, garsia_constant(base));

    bool all_grow = true;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        BigInt level = pairs[k].p.degree();
        if (pairs[k].q.degree() > level) level = pairs[k].q.degree();
        level += 1;
        Json line{{"k", k},
                  {"exponent", cf.exps[k - 1].str()},
                  {"p_degree", pairs[k].p.degree().str()},
                  {"q_degree", pairs[k].q.degree().str()},
                  {"level", level.str()}};
        if (k >= 2) {
            const GrowthRow& row = growth[k - 2];
            line["growth_pass"] = row.pass;
            line["growth_threshold"] = row.dyadic_threshold.str();
            all_grow = all_grow && row.pass;
        } else {
            line["growth_pass"] = nullptr;
        }
        emit(line);
    }
    std::cerr << pairs.size() - 1 << " elements, growth "
              << (all_grow ? "satisfied" : "VIOLATED") << "\n";
    return all_grow ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified IFS synthesis and verification"};
    app.require_subcommand(1);

    std::string minpoly = "x-2";
    std::string interval = "1,3";
    std::string eps_spec;
    std::string out_path;
    std::string cert_path;
    std::string csv_path;
    std::string s_text;
    std::string t_text;
    std::string exponents;
    unsigned depth = 2;
    unsigned brute_max = 0;
    unsigned level_n = 1;
    unsigned max_n = 1;
    unsigned delta_cap = kCylinderLevelCap;
    int rc = 0;

    CLI::App* synth = app.add_subcommand("synthesize", "construct a certified parameter pair");
    synth->add_option("--minpoly", minpoly, "integer minimal polynomial of the base")->required();
    synth->add_option("--interval", interval, "isolating interval \"lo,hi\"")->required();
    synth->add_option("--epsilon", eps_spec,
                      "gap budget: geom:r | superexp:r | factorial | table:a,b | file:PATH")
        ->required();
    synth->add_option("--depth", depth, "number of continued-fraction elements")->required();
    synth->add_option("--out", out_path, "certificate output path")->required();
    synth->callback([&] { rc = run_synthesize(minpoly, interval, eps_spec, depth, out_path); });

    CLI::App* verify = app.add_subcommand("verify", "replay a certificate transcript");
    verify->add_option("--cert", cert_path, "certificate path")->required();
    verify->add_option("--brute-max", brute_max, "also measure gaps up to this level");
    verify->add_option("--csv", csv_path, "write per-level gap bounds as CSV");
    verify->callback([&] { rc = run_verify(cert_path, brute_max, csv_path); });

    CLI::App* delta = app.add_subcommand("delta", "minimal cylinder gap at one level");
    delta->add_option("--minpoly", minpoly, "integer minimal polynomial of the base");
    delta->add_option("--interval", interval, "isolating interval \"lo,hi\"");
    delta->add_option("--s", s_text, "first translation: p/q | poly:NUM/DEN | cf:e0,e1,...")
        ->required();
    delta->add_option("--t", t_text, "second translation, same forms")->required();
    delta->add_option("--n", level_n, "cylinder level")->required();
    delta->add_option("--cap", delta_cap, "enumeration level cap");
    delta->callback(
        [&] { rc = run_delta(minpoly, interval, s_text, t_text, level_n, delta_cap); });

    CLI::App* overlaps = app.add_subcommand("overlaps", "exact cylinder collisions and their relations");
    overlaps->add_option("--minpoly", minpoly, "integer minimal polynomial of the base");
    overlaps->add_option("--interval", interval, "isolating interval \"lo,hi\"");
    overlaps->add_option("--s", s_text, "first translation, exact forms only")->required();
    overlaps->add_option("--t", t_text, "second translation, exact forms only")->required();
    overlaps->add_option("--max-n", max_n, "search levels 1..max-n")->required();
    overlaps->callback([&] { rc = run_overlaps(minpoly, interval, s_text, t_text, max_n); });

    CLI::App* garsia = app.add_subcommand("garsia", "separation scale constants of the base");
    garsia->add_option("--minpoly", minpoly, "integer minimal polynomial of the base");
    garsia->add_option("--interval", interval, "isolating interval \"lo,hi\"");
    garsia->callback([&] { rc = run_garsia(minpoly, interval); });

    CLI::App* cf = app.add_subcommand("cf", "convergents and growth of a power-element fraction");
    cf->add_option("--minpoly", minpoly, "integer minimal polynomial of the base");
    cf->add_option("--interval", interval, "isolating interval \"lo,hi\"");
    cf->add_option("--exponents", exponents, "comma-separated element exponents")->required();
    cf->callback([&] { rc = run_cf(minpoly, interval, exponents); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
