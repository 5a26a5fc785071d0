#include "qmc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace qmc {

Codeword corrupt_blocks(const FieldTower& t, const Codeword& w, const CodeParams& p, uint64_t e, Rng& rng) {
    check_shape(w, p);
    if (e >= p.n_blocks) throw RegimeError("corrupt: error count must be below the block count");
    Codeword out = w;
    // partial Fisher-Yates to pick e distinct block positions
    std::vector<uint64_t> idx(p.n_blocks);
    for (uint64_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (uint64_t i = 0; i < e; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    for (uint64_t i = 0; i < e; ++i) {
        auto& blk = out.blocks[idx[i]];
        do {
            for (auto& x : blk) x = {uint32_t(rng.below(t.k_size()))};
        } while (blk == w.blocks[idx[i]]);
    }
    return out;
}

void run_experiment(std::ostream& os, const FieldTower& t, const ExperimentSpec& spec) {
    if (spec.errors >= spec.params.n_blocks) throw RegimeError("experiment: errors must be below the block count");
    os << "trial,seed,errors,in_space,in_list,list_size,dim,agreement,degz\n";
    uint64_t successes = 0;
    for (uint64_t trial = 0; trial < spec.trials; ++trial) {
        uint64_t seed = spec.seed + trial;
        Rng rng(seed);
        MultiPoly f = random_poly(t, spec.params.m, spec.params.k, rng);
        Codeword sent = encode_qmult(t, f, spec.params);
        Codeword received = corrupt_blocks(t, sent, spec.params, spec.errors, rng);
        DecodeResult res = list_decode(t, received, spec.params, spec.r, spec.enumeration_cap);
        bool in_space = affine_space_contains(t, res.space, f);
        bool in_list = false;
        for (const auto& [cand, ag] : res.candidates) in_list = in_list || cand == f;
        if (in_list) ++successes;
        os << trial << ',' << seed << ',' << spec.errors << ',' << (in_space ? 1 : 0) << ','
           << (in_list ? 1 : 0) << ',' << res.candidates.size() << ','
           << (res.space.empty ? -1 : int64_t(res.space.dim())) << ','
           << agreement_count(received, sent) << ',' << res.measured_degz << '\n';
    }
    os << "# trials=" << spec.trials << " success_rate=" << std::fixed
       << double(successes) / double(spec.trials) << '\n';
}

namespace {

struct ParamFlags {
    uint32_t p = 0, e = 1, m = 1, s = 1, k = 1;
    uint64_t a_size = 0;
    std::string a_csv;
};

void add_param_flags(CLI::App* cmd, ParamFlags& pf, bool need_code_shape = true) {
    cmd->add_option("--p", pf.p, "field characteristic (prime)")->required();
    cmd->add_option("--e", pf.e, "extension degree of the base field, q = p^e");
    if (need_code_shape) {
        cmd->add_option("--m", pf.m, "number of variables");
        cmd->add_option("--s", pf.s, "multiplicity / folding order")->required();
        cmd->add_option("--k", pf.k, "degree bound")->required();
        cmd->add_option("--A-size", pf.a_size, "use the first n nonzero field elements as A");
        cmd->add_option("--A", pf.a_csv, "explicit comma-separated A (canonical encodings)");
    }
}

std::vector<FqElem> resolve_a(const FieldTower& t, const ParamFlags& pf) {
    std::vector<FqElem> A;
    if (!pf.a_csv.empty()) {
        std::stringstream ss(pf.a_csv);
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                A.push_back({uint32_t(std::stoul(part))});
            } catch (...) {
                throw ParseError("bad --A entry: " + part);
            }
        }
    } else if (pf.a_size > 0) {
        if (pf.a_size >= t.q()) throw RegimeError("A-size must be below q");
        for (uint32_t i = 1; i <= pf.a_size; ++i) A.push_back({i});
    } else {
        throw ParseError("one of --A or --A-size is required");
    }
    return A;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open input file: " + path);
    return is;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open output file: " + path);
    return os;
}

int cmd_params(const ParamFlags& pf) {
    FieldTower t = FieldTower::build(pf.p, pf.e);
    CodeParams cp = make_code_params(t, pf.m, pf.s, pf.k, resolve_a(t, pf));
    std::cout << t.header_line() << '\n';
    std::cout << "q=" << t.q() << " bracket3=" << t.bracket3_int() << '\n';
    std::cout << "m=" << cp.m << " s=" << cp.s << " k=" << cp.k << " A=";
    for (size_t i = 0; i < cp.A.size(); ++i) std::cout << (i ? "," : "") << cp.A[i].v;
    std::cout << '\n';
    std::cout << "N=" << cp.n_blocks << " block_size=" << cp.block_size << '\n';
    std::cout << "dimension=" << dimension(cp) << " dimension_closed_form=" << dimension_closed_form(cp)
              << '\n';
    std::cout << "rate=" << rate(cp).str() << " distance_lb=" << distance_lb(cp).str() << '\n';
    for (uint32_t r = 1; r <= cp.s; ++r) {
        std::cout << "r=" << r << ": ";
        try {
            DecodeConfig cfg = cp.m == 1 ? choose_config_uni(t, cp.n_blocks, cp.s, r, cp.k)
                                         : choose_config_multi(t, cp.m, cp.A.size(), cp.s, r, cp.k);
            std::cout << "d=" << cfg.d << " t_min=" << cfg.t_min << " t_stated=" << cfg.t_stated;
            if (cfg.paper_d >= 0) std::cout << " paper_d=" << cfg.paper_d;
            std::cout << '\n';
        } catch (const RegimeError& ex) {
            std::cout << "unavailable (" << ex.what() << ")\n";
        }
    }
    return 0;
}

int cmd_encode(const ParamFlags& pf, const std::string& in, const std::string& out, const std::string& code) {
    FieldTower t = FieldTower::build(pf.p, pf.e);
    CodeParams cp = make_code_params(t, pf.m, pf.s, pf.k, resolve_a(t, pf));
    auto is = open_in(in);
    MultiPoly f = read_message_file(is);
    if (f.arity() != cp.m) throw ParseError("message arity does not match the parameters");
    for (const auto& [key, c] : f.terms())
        if (c.v >= t.k_size()) throw ParseError("message coefficient outside K");
    Codeword w;
    try {
        w = code == "frm" ? encode_frm(t, f, cp) : encode_qmult(t, f, cp);
    } catch (const std::invalid_argument& ex) {
        throw ParseError(std::string("encode: ") + ex.what());
    }
    auto os = open_out(out);
    write_codeword_file(os, t, cp, w);
    return 0;
}

int cmd_corrupt(const std::string& in, const std::string& out, uint64_t e, uint64_t seed) {
    auto is = open_in(in);
    CodewordFile cf = read_codeword_file(is);
    Rng rng(seed);
    Codeword w = corrupt_blocks(cf.tower, cf.word, cf.params, e, rng);
    auto os = open_out(out);
    write_codeword_file(os, cf.tower, cf.params, w);
    return 0;
}

int cmd_decode(const std::string& in, const std::string& out, uint32_t r, uint64_t cap,
               const std::string& code) {
    auto is = open_in(in);
    CodewordFile cf = read_codeword_file(is);
    Codeword w = cf.word;
    if (code == "frm") w = basis_change(cf.tower, w, cf.params, BasisDir::eval_to_deriv);
    DecodeResult res = list_decode(cf.tower, w, cf.params, r, cap);
    if (out.empty()) {
        write_decode_result(std::cout, cf.tower, cf.params, res);
    } else {
        auto os = open_out(out);
        write_decode_result(os, cf.tower, cf.params, res);
    }
    return 0;
}

int cmd_experiment(const ParamFlags& pf, uint32_t r, uint64_t errors, uint64_t trials, uint64_t seed,
                   uint64_t cap, const std::string& out) {
    FieldTower t = FieldTower::build(pf.p, pf.e);
    ExperimentSpec spec;
    spec.params = make_code_params(t, pf.m, pf.s, pf.k, resolve_a(t, pf));
    spec.r = r;
    spec.errors = errors;
    spec.trials = trials;
    spec.seed = seed;
    spec.enumeration_cap = cap;
    if (out.empty()) {
        run_experiment(std::cout, t, spec);
    } else {
        auto os = open_out(out);
        run_experiment(os, t, spec);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Q-multiplicity / folded Reed-Muller codes: encoding, channel simulation, list decoding"};
    app.require_subcommand(1);

    ParamFlags pf_params, pf_encode, pf_exp;
    std::string in, out, code = "qmult";
    uint32_t r = 1;
    uint64_t errors = 0, trials = 10, seed = 0, cap = 65536;

    CLI::App* c_params = app.add_subcommand("params", "report code parameters and per-r decode thresholds");
    add_param_flags(c_params, pf_params);

    CLI::App* c_encode = app.add_subcommand("encode", "encode a message file");
    add_param_flags(c_encode, pf_encode);
    c_encode->add_option("--in", in, "message file")->required();
    std::string enc_out;
    c_encode->add_option("--out", enc_out, "codeword file")->required();
    c_encode->add_option("--code", code, "qmult or frm")->check(CLI::IsMember({"qmult", "frm"}));

    CLI::App* c_corrupt = app.add_subcommand("corrupt", "replace random blocks of a codeword file");
    std::string cor_in, cor_out;
    c_corrupt->add_option("--in", cor_in, "codeword file")->required();
    c_corrupt->add_option("--out", cor_out, "output file")->required();
    c_corrupt->add_option("--errors", errors, "number of blocks to corrupt")->required();
    c_corrupt->add_option("--seed", seed, "RNG seed");

    CLI::App* c_decode = app.add_subcommand("decode", "list decode a received word file");
    std::string dec_in, dec_out, dec_code = "qmult";
    c_decode->add_option("--in", dec_in, "received word file")->required();
    c_decode->add_option("--out", dec_out, "result file (stdout when omitted)");
    c_decode->add_option("--r", r, "window size")->required();
    c_decode->add_option("--cap", cap, "enumeration cap");
    c_decode->add_option("--code", dec_code, "qmult or frm input encoding")
        ->check(CLI::IsMember({"qmult", "frm"}));

    CLI::App* c_exp = app.add_subcommand("experiment", "seeded encode/corrupt/decode trials, CSV output");
    add_param_flags(c_exp, pf_exp);
    uint32_t exp_r = 1;
    std::string exp_out;
    c_exp->add_option("--r", exp_r, "window size")->required();
    c_exp->add_option("--errors", errors, "blocks corrupted per trial")->required();
    c_exp->add_option("--trials", trials, "number of trials");
    c_exp->add_option("--seed", seed, "master seed");
    c_exp->add_option("--cap", cap, "enumeration cap");
    c_exp->add_option("--out", exp_out, "CSV file (stdout when omitted)");

    CLI::App* c_self = app.add_subcommand("selftest", "run the per-module invariant suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (c_params->parsed()) return cmd_params(pf_params);
        if (c_encode->parsed()) return cmd_encode(pf_encode, in, enc_out, code);
        if (c_corrupt->parsed()) return cmd_corrupt(cor_in, cor_out, errors, seed);
        if (c_decode->parsed()) return cmd_decode(dec_in, dec_out, r, cap, dec_code);
        if (c_exp->parsed()) return cmd_experiment(pf_exp, exp_r, errors, trials, seed, cap, exp_out);
        if (c_self->parsed()) return selftest(std::cout) ? 0 : 1;
    } catch (const RegimeError& ex) {
        std::cerr << "parameter regime violation: " << ex.what() << '\n';
        return 2;
    } catch (const ParseError& ex) {
        std::cerr << "malformed input: " << ex.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "parameter regime violation: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qmc
