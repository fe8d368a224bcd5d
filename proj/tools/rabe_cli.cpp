// rabe: command-line front end for the registered ABE system, its fraud
// proofs, the protocol simulator and the policy-size benchmark.
//
// Exit codes: 0 success, 1 domain failure (bottom results, rejected
// registration, ...), 2 malformed input or usage error.

#include <sodium.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rabe/bench.hpp"
#include "rabe/envelope.hpp"
#include "rabe/fraud/codec.hpp"
#include "rabe/group/bls12.hpp"
#include "rabe/group/mock.hpp"
#include "rabe/registered/codec.hpp"
#include "rabe/sim/engine.hpp"

namespace fs = std::filesystem;
using namespace rabe;

namespace {

// Domain failure: exit 1.
struct Bottom : Error {
    using Error::Error;
};

// Malformed input: exit 2.
struct BadInput : Error {
    using Error::Error;
};

struct Options {
    std::string backend = "real";
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool binary = false;

    // setup
    std::size_t levels = 0;
    std::string universe_file;
    // keygen / register / transform / fraud
    std::string crs, aux, mpk, pk, sk, ct, ctp, proof, name, attrs, policy, in, out, scenario;
    // simulate
    std::size_t fuzz = 0, max_levels = 2;
    // bench
    std::string attr_range = "10..100";
    std::size_t step = 10, reps = 20;
};

Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw BadInput("cannot read '" + path + "'");
    return Bytes(std::istreambuf_iterator<char>(f), {});
}

void write_file(const fs::path& path, ByteView data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::vector<std::string> read_universe(const std::string& path) {
    auto bytes = read_file(path);
    std::string text(bytes.begin(), bytes.end());
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        for (auto& c : line)
            if (c == ',') c = ' ';
        std::istringstream words(line);
        for (std::string w; words >> w;) {
            if (!algebra::Policy::valid_identifier(w)) throw BadInput("invalid attribute name '" + w + "'");
            if (std::find(out.begin(), out.end(), w) != out.end()) throw BadInput("duplicate attribute '" + w + "'");
            out.push_back(w);
        }
    }
    if (out.empty()) throw BadInput("universe file lists no attributes");
    return out;
}

algebra::AttributeSet parse_attrs(const std::string& s) {
    algebra::AttributeSet out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) {
                if (!algebra::Policy::valid_identifier(cur)) throw BadInput("invalid attribute name '" + cur + "'");
                out.insert(cur);
            }
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::uint64_t fresh_seed() {
    ensure_sodium();
    std::uint64_t s = 0;
    randombytes_buf(&s, sizeof s);
    return s;
}

template <group::PairingBackend B>
class Commands {
public:
    explicit Commands(const Options& o) : o_(o), rng_(o.seed ? *o.seed : fresh_seed()) {}

    int setup() {
        auto universe = read_universe(o_.universe_file);
        auto crs = registered::setup<B>(o_.levels, universe, rng_);
        auto aux = registered::initial_aux(crs);
        save(out_path("crs"), to_artifact(crs));
        save(out_path("aux"), to_artifact(aux));
        save(out_path("mpk"), to_artifact(aux.mpk));
        std::cout << "setup: l=" << o_.levels << " (" << crs.capacity() << " users), " << universe.size()
                  << " attributes, backend " << B::name() << "\n";
        return 0;
    }

    int keygen() {
        auto crs = load<registered::MultiCrs<B>>(o_.crs);
        auto aux = load<registered::AuxState<B>>(o_.aux);
        auto keys = registered::keygen(crs, aux, rng_);
        save(out_path(o_.name + ".pk"), to_artifact(keys.pk));
        save(out_path(o_.name + ".sk"), to_artifact(keys.sk));
        std::cout << "keygen: " << o_.name << " at counter " << keys.pk.ctr << "\n";
        return 0;
    }

    int register_user() {
        auto crs = load<registered::MultiCrs<B>>(o_.crs);
        auto aux = load<registered::AuxState<B>>(o_.aux);
        auto pk = load<registered::UserPublicKey<B>>(o_.pk);
        registered::register_user(crs, aux, pk, parse_attrs(o_.attrs));
        auto aux_bytes = to_artifact(aux);
        save(o_.aux, aux_bytes);
        save(o_.mpk.empty() ? out_path("mpk") : fs::path(o_.mpk), to_artifact(aux.mpk));
        std::cout << "register: counter now " << aux.ctr << ", aux digest " << to_hex(sha256(aux_bytes)) << "\n";
        return 0;
    }

    int encrypt() {
        auto mpk = load<registered::MultiMasterPublicKey<B>>(o_.mpk);
        auto policy = algebra::Policy::parse(o_.policy);
        auto ct = registered::encrypt(mpk, policy, read_file(o_.in), rng_);
        auto bytes = to_artifact(ct);
        save(o_.out.empty() ? out_path("ct") : fs::path(o_.out), bytes);
        std::cout << "encrypt: id " << to_hex(sha256(bytes)) << ", tag " << to_hex(sim::tag_commitment(ct)) << "\n";
        return 0;
    }

    int transform() {
        auto crs = load<registered::MultiCrs<B>>(o_.crs);
        auto aux = load<registered::AuxState<B>>(o_.aux);
        auto pk = load<registered::UserPublicKey<B>>(o_.pk);
        auto ct = load<registered::MultiCiphertext<B>>(o_.ct);
        auto bundle = registered::update(crs, aux, pk);
        if (!bundle) throw Bottom("public key is not registered");
        auto out = registered::transform_full(*bundle, ct);
        if (out.status == registered::TransformStatus::unsatisfied)
            throw Bottom("attributes do not satisfy the policy");
        if (out.status == registered::TransformStatus::stale_helper_key)
            throw Bottom("helper key is stale; re-run with a newer aux");
        save(o_.out.empty() ? out_path("ctp") : fs::path(o_.out), to_artifact(*out.result));
        std::cout << "transform: instance " << out.result->instance << "\n";
        return 0;
    }

    int decrypt() {
        auto sk = load<registered::UserSecretKey<B>>(o_.sk);
        auto ft = load<registered::FullTransform<B>>(o_.ctp);
        auto ct = load<registered::MultiCiphertext<B>>(o_.ct);
        std::optional<Bytes> m;
        try {
            m = registered::decrypt(sk, ft, ct);
        } catch (const IntegrityError& e) {
            throw Bottom(e.what());
        }
        if (!m) throw Bottom("bottom: transform ciphertext rejected by the verifiable tag");
        if (o_.out.empty() || o_.out == "-")
            std::cout.write(reinterpret_cast<const char*>(m->data()), static_cast<std::streamsize>(m->size()));
        else
            write_file(o_.out, *m);
        return 0;
    }

    int fraud_prove() {
        auto sk = load<registered::UserSecretKey<B>>(o_.sk);
        auto pk = load<registered::UserPublicKey<B>>(o_.pk);
        auto ft = load<registered::FullTransform<B>>(o_.ctp);
        auto pi = fraud::fraud_prove(sk, pk, ft, rng_);
        save(o_.out.empty() ? out_path("proof") : fs::path(o_.out), to_artifact(pi));
        std::cout << "fraud-prove: proof written\n";
        return 0;
    }

    // Prints the verifier's verdict; both verdicts are successful runs.
    int fraud_verify() {
        auto ct = load<registered::MultiCiphertext<B>>(o_.ct);
        auto pk = load<registered::UserPublicKey<B>>(o_.pk);
        auto verdict = sim::pv_verdict<B>(from_envelope(read_file(o_.ctp)), from_envelope(read_file(o_.proof)), ct, pk);
        std::cout << "verdict: " << verdict << (verdict ? " (fraud confirmed)" : " (no fraud)") << "\n";
        return 0;
    }

    int simulate() {
        nlohmann::json out;
        if (o_.fuzz > 0) {
            out = sim::fuzz_traces<B>(o_.fuzz, o_.seed ? *o_.seed : 1, o_.max_levels).to_json();
        } else {
            auto bytes = read_file(o_.scenario);
            sim::Scenario sc;
            try {
                sc = sim::parse_scenario(std::string(bytes.begin(), bytes.end()));
            } catch (const Error& e) {
                throw BadInput(e.what());
            }
            if (o_.seed) sc.seed = *o_.seed;
            out = sim::run_scenario<B>(sc).to_json();
        }
        auto text = out.dump(2) + "\n";
        if (o_.out.empty() || o_.out == "-")
            std::cout << text;
        else
            write_file(o_.out, as_bytes(text));
        return 0;
    }

    int bench() {
        auto dots = o_.attr_range.find("..");
        std::size_t lo = 0, hi = 0;
        try {
            lo = dots == std::string::npos ? std::stoul(o_.attr_range) : std::stoul(o_.attr_range.substr(0, dots));
            hi = dots == std::string::npos ? lo : std::stoul(o_.attr_range.substr(dots + 2));
        } catch (const std::exception&) {
            throw BadInput("bad --attrs range '" + o_.attr_range + "'");
        }
        if (lo == 0 || hi < lo || o_.step == 0 || o_.reps == 0) throw BadInput("bad benchmark parameters");
        bench::Fixture<B> fx(hi, rng_);
        std::ostringstream csv;
        csv << bench::csv_header() << "\n";
        for (std::size_t n = lo; n <= hi; n += o_.step) csv << bench::csv_row(bench::measure(fx, n, o_.reps, rng_)) << "\n";
        if (o_.out.empty() || o_.out == "-")
            std::cout << csv.str();
        else
            write_file(o_.out, as_bytes(csv.str()));
        return 0;
    }

private:
    template <class T>
    T load(const std::string& path) {
        if (path.empty()) throw BadInput("missing input file argument");
        return from_artifact<T>(from_envelope(read_file(path)));
    }

    fs::path out_path(const std::string& stem) const {
        fs::path dir = o_.out_dir.empty() ? fs::path(".") : fs::path(o_.out_dir);
        return dir / (stem + (o_.binary ? ".bin" : ".json"));
    }

    void save(const fs::path& path, const Bytes& container) const {
        if (o_.binary)
            write_file(path, container);
        else
            write_file(path, as_bytes(to_envelope(container)));
    }

    const Options& o_;
    Drbg rng_;
};

template <group::PairingBackend B>
int dispatch(const std::string& cmd, const Options& o) {
    Commands<B> c(o);
    if (cmd == "setup") return c.setup();
    if (cmd == "keygen") return c.keygen();
    if (cmd == "register") return c.register_user();
    if (cmd == "encrypt") return c.encrypt();
    if (cmd == "transform") return c.transform();
    if (cmd == "decrypt") return c.decrypt();
    if (cmd == "fraud-prove") return c.fraud_prove();
    if (cmd == "fraud-verify") return c.fraud_verify();
    if (cmd == "simulate") return c.simulate();
    if (cmd == "bench") return c.bench();
    throw BadInput("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Registered ABE with verifiable outsourced decryption"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    if (const char* dir = std::getenv("RABE_OUT_DIR")) o.out_dir = dir;

    app.add_option("--backend", o.backend, "Group backend")
        ->check(CLI::IsMember({"real", "mock", "mock-wide"}))
        ->capture_default_str();
    app.add_option("--out-dir", o.out_dir, "Directory for generated artifacts (default $RABE_OUT_DIR or .)");
    app.add_option("--seed", o.seed, "Seed for the deterministic generator (default: fresh OS randomness)");
    app.add_flag("--binary", o.binary, "Write raw binary containers instead of JSON envelopes");

    auto* setup = app.add_subcommand("setup", "Create the multi-instance CRS and an empty aux state");
    setup->add_option("--l", o.levels, "Instances 0..l; supports 2^l users")->required()->check(CLI::Range(0, 6));
    setup->add_option("--universe", o.universe_file, "Attribute universe file")->required();

    auto* keygen = app.add_subcommand("keygen", "Generate a user key pair against the current aux counter");
    keygen->add_option("--crs", o.crs)->required();
    keygen->add_option("--aux", o.aux)->required();
    keygen->add_option("--name", o.name, "Output file stem")->required();

    auto* reg = app.add_subcommand("register", "Register a public key with an attribute set (updates aux in place)");
    reg->add_option("--crs", o.crs)->required();
    reg->add_option("--aux", o.aux)->required();
    reg->add_option("--pk", o.pk)->required();
    reg->add_option("--attrs", o.attrs, "Comma-separated attributes")->required();
    reg->add_option("--mpk", o.mpk, "Where to write the refreshed mpk");

    auto* enc = app.add_subcommand("encrypt", "Encrypt a file under a policy");
    enc->add_option("--mpk", o.mpk)->required();
    enc->add_option("--policy", o.policy, "e.g. \"doctor and (cardiology or oncology)\"")->required();
    enc->add_option("--in", o.in)->required();
    enc->add_option("--out", o.out);

    auto* tr = app.add_subcommand("transform", "Outsourced transformation for a registered user");
    tr->add_option("--crs", o.crs)->required();
    tr->add_option("--aux", o.aux)->required();
    tr->add_option("--pk", o.pk)->required();
    tr->add_option("--ct", o.ct)->required();
    tr->add_option("--out", o.out);

    auto* dec = app.add_subcommand("decrypt", "Final decryption of a transform ciphertext");
    dec->add_option("--sk", o.sk)->required();
    dec->add_option("--ctp", o.ctp)->required();
    dec->add_option("--ct", o.ct)->required();
    dec->add_option("--out", o.out, "Plaintext output (default stdout)");

    auto* fp = app.add_subcommand("fraud-prove", "Prove that a transform ciphertext is incorrect");
    fp->add_option("--sk", o.sk)->required();
    fp->add_option("--pk", o.pk)->required();
    fp->add_option("--ctp", o.ctp)->required();
    fp->add_option("--out", o.out);

    auto* fv = app.add_subcommand("fraud-verify", "Public verification of a fraud proof");
    fv->add_option("--proof", o.proof)->required();
    fv->add_option("--ctp", o.ctp)->required();
    fv->add_option("--ct", o.ct)->required();
    fv->add_option("--pk", o.pk)->required();

    auto* simc = app.add_subcommand("simulate", "Run a protocol scenario or a fuzz batch; prints a JSON report");
    auto* scen = simc->add_option("--scenario", o.scenario, "Scenario file");
    simc->add_option("--fuzz", o.fuzz, "Run N random traces instead of a scenario")->excludes(scen);
    simc->add_option("--max-levels", o.max_levels, "Largest l in fuzz traces")->check(CLI::Range(0, 4));
    simc->add_option("--out", o.out);

    auto* be = app.add_subcommand("bench", "AND-policy sweep; prints CSV");
    be->add_option("--attrs", o.attr_range, "Range lo..hi")->capture_default_str();
    be->add_option("--step", o.step)->capture_default_str();
    be->add_option("--reps", o.reps)->capture_default_str();
    be->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        if (app.get_subcommands().empty()) std::cerr << app.help();
        return 2;
    }
    if (simc->parsed() && o.fuzz == 0 && o.scenario.empty()) {
        std::cerr << "simulate: need --scenario or --fuzz\n";
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (o.backend == "mock") return dispatch<group::MockSmall>(cmd, o);
        if (o.backend == "mock-wide") return dispatch<group::MockWide>(cmd, o);
        return dispatch<group::Bls12Backend>(cmd, o);
    } catch (const Bottom& e) {
        std::cerr << "rabe: " << e.what() << "\n";
        return 1;
    } catch (const BadInput& e) {
        std::cerr << "rabe: " << e.what() << "\n";
        return 2;
    } catch (const DecodeError& e) {
        std::cerr << "rabe: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const PolicyError& e) {
        std::cerr << "rabe: bad policy: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "rabe: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "rabe: " << e.what() << "\n";
        return 2;
    }
}
