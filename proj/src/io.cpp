#include "qmc/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace qmc {

namespace {

std::string params_line(const CodeParams& p) {
    std::ostringstream os;
    os << "params m=" << p.m << " s=" << p.s << " k=" << p.k << " A=";
    for (size_t i = 0; i < p.A.size(); ++i) {
        if (i) os << ',';
        os << p.A[i].v;
    }
    return os.str();
}

CodeParams parse_params_line(const FieldTower& t, const std::string& line) {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag != "params") throw ParseError("expected params line");
    uint32_t m = 0, s = 0, k = 0;
    std::vector<FqElem> A;
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("params line: bad token " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "m") m = uint32_t(std::stoul(val));
            else if (key == "s") s = uint32_t(std::stoul(val));
            else if (key == "k") k = uint32_t(std::stoul(val));
            else if (key == "A") {
                std::stringstream as(val);
                std::string part;
                while (std::getline(as, part, ',')) A.push_back({uint32_t(std::stoul(part))});
            } else {
                throw ParseError("params line: unknown key " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("params line: bad value for " + key);
        } catch (const std::out_of_range&) {
            throw ParseError("params line: value out of range for " + key);
        }
    }
    return make_code_params(t, m, s, k, A);
}

std::string next_content_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        if (line[a] == '#') continue;
        size_t b = line.find_last_not_of(" \t\r");
        return line.substr(a, b - a + 1);
    }
    throw ParseError("unexpected end of file");
}

}  // namespace

void write_codeword_file(std::ostream& os, const FieldTower& t, const CodeParams& p, const Codeword& w) {
    check_shape(w, p);
    os << t.header_line() << '\n' << params_line(p) << '\n';
    for (size_t i = 0; i < w.blocks.size(); ++i) {
        os << i << ":";
        for (size_t j = 0; j < w.blocks[i].size(); ++j) os << (j ? "," : " ") << w.blocks[i][j].v;
        os << '\n';
    }
}

CodewordFile read_codeword_file(std::istream& is) {
    FieldTower tower = FieldTower::parse_header(next_content_line(is));
    CodeParams params = parse_params_line(tower, next_content_line(is));
    Codeword w;
    for (uint64_t i = 0; i < params.n_blocks; ++i) {
        std::string line = next_content_line(is);
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("codeword: missing ':' in block line");
        uint64_t idx = 0;
        try {
            idx = std::stoull(line.substr(0, colon));
        } catch (...) {
            throw ParseError("codeword: bad block index");
        }
        if (idx != i) throw ParseError("codeword: blocks out of order");
        std::vector<KElem> blk;
        std::stringstream ss(line.substr(colon + 1));
        std::string part;
        while (std::getline(ss, part, ',')) {
            size_t a = part.find_first_not_of(" \t");
            if (a == std::string::npos) throw ParseError("codeword: empty entry");
            uint64_t v = 0;
            try {
                v = std::stoull(part.substr(a));
            } catch (...) {
                throw ParseError("codeword: bad entry " + part);
            }
            if (v >= tower.k_size()) throw ParseError("codeword: entry outside K");
            blk.push_back({uint32_t(v)});
        }
        if (blk.size() != params.block_size) throw ParseError("codeword: wrong block size");
        w.blocks.push_back(std::move(blk));
    }
    return {std::move(tower), std::move(params), std::move(w)};
}

void write_message_file(std::ostream& os, const FieldTower& t, const CodeParams& p, const MultiPoly& f) {
    os << t.header_line() << '\n' << params_line(p) << '\n' << poly_to_string(f) << '\n';
}

MultiPoly read_message_file(std::istream& is) {
    std::string line = next_content_line(is);
    if (line.rfind("QMC1", 0) == 0) line = next_content_line(is);  // optional tower header
    if (line.rfind("params", 0) == 0) line = next_content_line(is);  // optional params echo
    return poly_parse(line);
}

void write_decode_result(std::ostream& os, const FieldTower& t, const CodeParams& p, const DecodeResult& res) {
    os << t.header_line() << '\n' << params_line(p) << '\n';
    os << "config r=" << res.config.r << " d=" << res.config.d << " t_min=" << res.config.t_min
       << " t_stated=" << res.config.t_stated;
    if (res.config.paper_d >= 0) os << " paper_d=" << res.config.paper_d;
    os << '\n';
    if (res.measured_degz >= 0) {
        os << "degz=" << res.measured_degz << " ms_bound=" << uint64_t(p.m) * p.s
           << " within_ms_bound=" << (res.degz_within_ms ? 1 : 0) << " paths_agree=" << (res.paths_agree ? 1 : 0)
           << '\n';
    }
    if (res.space.empty) {
        os << "dim=-1\n";
    } else {
        os << "dim=" << res.space.dim() << '\n';
        os << "base: " << poly_to_string(res.space.base) << '\n';
        for (const auto& b : res.space.basis) os << "basis: " << poly_to_string(b) << '\n';
    }
    if (!res.enumerated) {
        os << "candidates: not-enumerated\n";
    } else {
        os << "candidates: " << res.candidates.size() << '\n';
        for (const auto& [f, ag] : res.candidates) os << ag << " " << poly_to_string(f) << '\n';
    }
}

}  // namespace qmc
