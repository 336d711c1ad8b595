#pragma once

#include "clgroup/sieve.hpp"

#include <gmpxx.h>

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clgroup {

/*
 * Relation file:
 *   H delta=<D> b1=<B1> b2=<B2> tolerance=<T> lp=<k>
 *   R <idx>:<exp> ... [L <p>:<+-1>]* # <seed>/<ideal-id>/<x>
 * Files from several runs may be concatenated as long as the headers agree.
 */
struct RelationFileHeader
{
    mpz_class delta;
    u64 b1 = 0;
    u64 b2 = 0;
    double tolerance = 0;
    int lp_count = 0;

    bool operator==(RelationFileHeader const & o) const
    {
        return delta == o.delta && b1 == o.b1 && b2 == o.b2 && lp_count == o.lp_count &&
               std::fabs(tolerance - o.tolerance) < 1e-9;
    }

    static RelationFileHeader of(Discriminant const & disc, SieveParams const & p)
    {
        return {disc.value(), p.b1, p.b2, p.tolerance, p.lp_count};
    }
};

inline void write_header(std::ostream & os, RelationFileHeader const & h)
{
    os << "H delta=" << h.delta << " b1=" << h.b1 << " b2=" << h.b2
       << " tolerance=" << std::setprecision(17) << h.tolerance << " lp=" << h.lp_count << "\n";
}

inline void write_relation(std::ostream & os, Relation const & r)
{
    os << "R";
    for (auto const & [i, e] : r.exponents)
        os << " " << i << ":" << e;
    if (!r.large_primes.empty()) {
        os << " L";
        for (auto const & [p, s] : r.large_primes)
            os << " " << p << ":" << s;
    }
    os << " # " << r.seed << "/" << r.ideal_id << "/" << r.x << "\n";
}

struct RelationFile
{
    std::optional<RelationFileHeader> header;
    std::vector<Relation> relations;
};

namespace detail {
inline std::pair<std::string, std::string> split_at(std::string const & tok, char sep)
{
    auto pos = tok.find(sep);
    if (pos == std::string::npos)
        throw std::runtime_error("relation file: malformed token '" + tok + "'");
    return {tok.substr(0, pos), tok.substr(pos + 1)};
}

inline RelationFileHeader parse_header(std::string const & line)
{
    std::istringstream in(line);
    std::string tok;
    in >> tok;
    RelationFileHeader h;
    unsigned seen = 0;
    while (in >> tok) {
        auto [k, v] = split_at(tok, '=');
        if (k == "delta") {
            if (h.delta.set_str(v, 10) != 0)
                throw std::runtime_error("relation file: bad delta");
            seen |= 1;
        } else if (k == "b1") {
            h.b1 = std::stoull(v);
            seen |= 2;
        } else if (k == "b2") {
            h.b2 = std::stoull(v);
            seen |= 4;
        } else if (k == "tolerance") {
            h.tolerance = std::stod(v);
            seen |= 8;
        } else if (k == "lp") {
            h.lp_count = std::stoi(v);
            seen |= 16;
        }
    }
    if (seen != 31)
        throw std::runtime_error("relation file: incomplete header");
    return h;
}

inline Relation parse_relation(std::string const & line)
{
    Relation r;
    std::string body = line;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
        body = line.substr(0, hash);
        std::string prov = line.substr(hash + 1);
        for (char & ch : prov) {
            if (ch == '/')
                ch = ' ';
        }
        std::istringstream pin(prov);
        pin >> r.seed >> r.ideal_id >> r.x;
    }
    std::istringstream in(body);
    std::string tok;
    in >> tok;
    bool large = false;
    while (in >> tok) {
        if (tok == "L") {
            large = true;
            continue;
        }
        auto [k, v] = split_at(tok, ':');
        if (large) {
            int s = std::stoi(v);
            if (s != 1 && s != -1)
                throw std::runtime_error("relation file: large prime exponent must be +-1");
            r.large_primes.emplace_back(std::stoull(k), s);
        } else {
            r.exponents.emplace_back(static_cast<uint32_t>(std::stoul(k)), std::stoll(v));
        }
    }
    std::sort(r.exponents.begin(), r.exponents.end());
    std::sort(r.large_primes.begin(), r.large_primes.end());
    return r;
}
} // namespace detail

/* Reads a header and relations; repeated identical headers are accepted. */
inline RelationFile read_relations(std::istream & in)
{
    RelationFile f;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            if (line[0] == 'H') {
                auto h = detail::parse_header(line);
                if (f.header && !(*f.header == h))
                    throw std::runtime_error("relation file: conflicting headers");
                f.header = h;
            } else if (line[0] == 'R') {
                f.relations.push_back(detail::parse_relation(line));
            }
        } catch (std::logic_error const & e) {
            throw std::runtime_error("relation file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return f;
}

} // namespace clgroup
