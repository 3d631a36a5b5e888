#pragma once

// Certificate serialization. Layout is fixed and insertion-ordered so a
// rebuild of the same certificate dumps byte-identical text. Mathematical
// quantities travel as decimal strings ("p/q" for rationals), because level
// markers and exponents outgrow every native JSON number type; stage indices
// and the schema version stay plain integers. Separation constants that only
// exist as dyadic brackets serialize as {"log2_lo", "log2_hi"} objects.

#include "betaifs/synthesis.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace betaifs {

inline constexpr int kCertificateSchemaVersion = 1;

namespace detail {

using CertJson = nlohmann::ordered_json;

inline CertJson magnitude_to_json(const Magnitude& m) {
    if (m.is_exact()) return format_rational(m.exact_value());
    return CertJson{{"log2_lo", m.log2_lo().str()}, {"log2_hi", m.log2_hi().str()}};
}

inline Magnitude magnitude_from_json(const CertJson& j) {
    if (j.is_string()) {
        return Magnitude::from_rational(parse_rational(j.get<std::string>()));
    }
    if (j.is_object() && j.contains("log2_lo") && j.contains("log2_hi")) {
        return Magnitude::from_bracket(BigInt(j.at("log2_lo").get<std::string>()),
                                       BigInt(j.at("log2_hi").get<std::string>()));
    }
    throw input_error("certificate: expected a rational string or a log2 bracket");
}

inline BigInt bigint_from_json(const CertJson& j) {
    return BigInt(j.get<std::string>());
}

} // namespace detail

inline nlohmann::ordered_json certificate_to_json(const SynthesisCertificate& cert) {
    using detail::CertJson;
    CertJson j;
    j["schema_version"] = kCertificateSchemaVersion;
    j["base"] = CertJson{{"minpoly", format_polynomial(cert.minpoly)},
                         {"interval", CertJson::array({format_rational(cert.base_interval.lo),
                                                       format_rational(cert.base_interval.hi)})}};
    j["garsia"] = CertJson{{"M", std::to_string(cert.garsia.M)},
                           {"d", std::to_string(cert.garsia.d)},
                           {"landau", format_rational(cert.garsia.landau)},
                           {"beta_low", format_rational(cert.garsia.beta_low)}};
    j["epsilon"] = cert.epsilon.spec_string();
    CertJson s_exps = CertJson::array();
    for (const BigInt& e : cert.s_exponents) s_exps.push_back(e.str());
    j["s_exponents"] = std::move(s_exps);
    CertJson t_exps = CertJson::array();
    for (const BigInt& e : cert.t_exponents) t_exps.push_back(e.str());
    j["t_exponents"] = std::move(t_exps);
    CertJson levels = CertJson::array();
    for (const LevelMarker& lv : cert.levels) {
        levels.push_back(CertJson{{"k", lv.k}, {"N", lv.N.str()}, {"M", lv.M.str()}});
    }
    j["levels"] = std::move(levels);
    CertJson seps = CertJson::array();
    for (const SeparationRecord& sep : cert.separations) {
        seps.push_back(CertJson{{"k", sep.k},
                                {"c", detail::magnitude_to_json(sep.c)},
                                {"L", sep.L.str()},
                                {"M1", detail::magnitude_to_json(sep.M1)}});
    }
    j["separations"] = std::move(seps);
    CertJson checks = CertJson::array();
    for (const CheckRecord& rec : cert.checks) {
        checks.push_back(CertJson{{"kind", rec.kind},
                                  {"k", rec.k},
                                  {"n", rec.n.str()},
                                  {"lhs", rec.lhs.str()},
                                  {"rhs", rec.rhs.str()}});
    }
    j["checks"] = std::move(checks);
    return j;
}

inline SynthesisCertificate certificate_from_json(const nlohmann::ordered_json& j) {
    try {
        if (!j.contains("schema_version") ||
            j.at("schema_version").get<int>() != kCertificateSchemaVersion) {
            throw input_error("certificate: missing or unsupported schema_version");
        }
        SynthesisCertificate cert;
        const auto& base = j.at("base");
        cert.minpoly = parse_polynomial(base.at("minpoly").get<std::string>());
        const auto& iv = base.at("interval");
        cert.base_interval = RationalInterval(parse_rational(iv.at(0).get<std::string>()),
                                              parse_rational(iv.at(1).get<std::string>()));
        const auto& gj = j.at("garsia");
        cert.garsia.M = static_cast<unsigned>(std::stoul(gj.at("M").get<std::string>()));
        cert.garsia.d = static_cast<unsigned>(std::stoul(gj.at("d").get<std::string>()));
        cert.garsia.landau = parse_rational(gj.at("landau").get<std::string>());
        cert.garsia.beta_low = parse_rational(gj.at("beta_low").get<std::string>());
        cert.epsilon =
            normalize_epsilon(EpsilonSequence::parse(j.at("epsilon").get<std::string>()));
        for (const auto& e : j.at("s_exponents")) {
            cert.s_exponents.push_back(detail::bigint_from_json(e));
        }
        for (const auto& e : j.at("t_exponents")) {
            cert.t_exponents.push_back(detail::bigint_from_json(e));
        }
        for (const auto& lv : j.at("levels")) {
            cert.levels.push_back({lv.at("k").get<std::size_t>(),
                                   detail::bigint_from_json(lv.at("N")),
                                   detail::bigint_from_json(lv.at("M"))});
        }
        for (const auto& sep : j.at("separations")) {
            cert.separations.push_back({sep.at("k").get<std::size_t>(),
                                        detail::magnitude_from_json(sep.at("c")),
                                        detail::bigint_from_json(sep.at("L")),
                                        detail::magnitude_from_json(sep.at("M1"))});
        }
        for (const auto& rec : j.at("checks")) {
            cert.checks.push_back({rec.at("kind").get<std::string>(),
                                   rec.at("k").get<std::size_t>(),
                                   detail::bigint_from_json(rec.at("n")),
                                   detail::bigint_from_json(rec.at("lhs")),
                                   detail::bigint_from_json(rec.at("rhs"))});
        }
        detail::validate_certificate_shape(cert);
        return cert;
    } catch (const input_error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("certificate: malformed document: ") + e.what());
    } catch (const std::runtime_error& e) {
        throw input_error(std::string("certificate: malformed field: ") + e.what());
    }
}

inline std::string write_certificate(const SynthesisCertificate& cert) {
    return certificate_to_json(cert).dump(2) + "\n";
}

inline SynthesisCertificate read_certificate(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("certificate: invalid JSON: ") + e.what());
    }
    return certificate_from_json(j);
}

} // namespace betaifs
