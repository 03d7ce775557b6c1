#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "sentpw/checkpoint.hpp"
#include "sentpw/eval.hpp"
#include "sentpw/numfmt.hpp"
#include "sentpw/synthetic.hpp"
#include "sentpw/trainer.hpp"
#include "sentpw/tsv.hpp"

using namespace sentpw;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir() {
    const fs::path dir = fs::path(SENTPW_TEST_TMPDIR);
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const fs::path p = workdir() / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
}

SyntheticConfig small_corpus() {
    SyntheticConfig sc;
    sc.classes = 6;
    sc.per_class = 12;
    sc.vocab = 80;
    return sc;
}

// The synthetic split used by the pipeline tests, written once.
struct Files {
    Dataset train;
    Dataset held_out;
    std::string train_path, triplets_path, dev_path, test_path;
};

const Files& files() {
    static const Files f = [] {
        Files out;
        const HeldOutSplit split = split_held_out(make_synthetic_corpus(small_corpus()), 4);
        out.train = split.train;
        out.held_out = split.held_out;
        out.train_path = write_file("train.tsv", to_tsv(split.train));
        out.triplets_path = write_file("triplets.tsv", to_tsv(sample_triplets(split.held_out, 40, 3)));
        out.dev_path = write_file("dev.tsv", to_tsv(sample_pairs(split.held_out, 30, 4)));
        out.test_path = write_file("test.tsv", to_tsv(sample_pairs(split.held_out, 30, 5)));
        return out;
    }();
    return f;
}

TrainConfig library_config() {
    TrainConfig cfg;
    cfg.steps_per_epoch = 20;
    cfg.d_in = 16;
    cfg.d_out = 8;
    cfg.mining.classes_per_batch = 4;
    cfg.seed = 9;
    return cfg;
}

std::vector<std::string> train_args(const std::string& out) {
    return {"train", "--data", files().train_path, "--out", out, "--steps", "20", "--d-in", "16",
            "--d-out", "8", "--classes-per-batch", "4", "--seed", "9",
            "--metrics", (workdir() / (fs::path(out).filename().string() + ".metrics")).string()};
}

FitResult library_fit() {
    const auto sentences = files().train.sentences();
    const Vocabulary vocab = build_vocab(sentences);
    return fit(library_config(), vocab, make_training_set(files().train, vocab, LossKind::multisim));
}

std::vector<std::vector<TokenId>> encode_all(const Vocabulary& v, const std::vector<Sentence>& s) {
    std::vector<std::vector<TokenId>> out;
    for (const auto& x : s) out.push_back(v.encode(x.tokens));
    return out;
}

}  // namespace

TEST_CASE("train then eval-triplets matches the library") {
    const std::string ckpt = (workdir() / "model.ckpt").string();
    const Result train = run_cli(train_args(ckpt));
    REQUIRE(train.code == 0);
    CHECK(train.err.find("# resolved config") != std::string::npos);
    CHECK(train.err.find("seed=9") != std::string::npos);

    const Checkpoint loaded = load_checkpoint(ckpt);
    const FitResult lib = library_fit();
    CHECK(loaded.params == lib.state.params);
    CHECK(loaded.meta_value("tokenize") == std::optional<std::string>("whitespace"));

    std::ostringstream lib_log;
    lib_log << "step\tloss\tkept_fraction\tmean_pos_sim\tmean_neg_sim\n";
    for (const auto& m : lib.log) lib_log << format_metrics(m) << '\n';
    CHECK(read_text_file(ckpt + ".metrics") == lib_log.str());

    const Result eval = run_cli({"eval-triplets", "--checkpoint", ckpt, "--data", files().triplets_path});
    REQUIRE(eval.code == 0);
    const Dataset trip = load_dataset(files().triplets_path, DatasetKind::triplets, TokenizeMode::whitespace);
    std::vector<Sentence> a, p, n;
    for (const auto& t : trip.triplets) {
        a.push_back(t.anchor);
        p.push_back(t.positive);
        n.push_back(t.negative);
    }
    const double acc = triplet_accuracy(embed_sequences(loaded.params, encode_all(loaded.vocab, a)),
                                        embed_sequences(loaded.params, encode_all(loaded.vocab, p)),
                                        embed_sequences(loaded.params, encode_all(loaded.vocab, n)));
    CHECK(eval.out == "accuracy=" + format_double(acc) + "\ntriplets=40\n");
}

TEST_CASE("eval-pairs reproduces the dev-threshold then test protocol") {
    const std::string ckpt = (workdir() / "pairs_model.ckpt").string();
    REQUIRE(run_cli(train_args(ckpt)).code == 0);
    const Checkpoint model = load_checkpoint(ckpt);
    const Result r = run_cli({"eval-pairs", "--checkpoint", ckpt, "--dev", files().dev_path, "--test",
                              files().test_path, "--grid-step", "0.01"});
    REQUIRE(r.code == 0);

    auto scores_of = [&](const std::string& path, std::vector<int>& labels) {
        const Dataset ds = load_dataset(path, DatasetKind::pairs, TokenizeMode::whitespace);
        std::vector<Sentence> first, second;
        for (const auto& pr : ds.pairs) {
            first.push_back(pr.first);
            second.push_back(pr.second);
            labels.push_back(pr.label);
        }
        const Matrix A = embed_sequences(model.params, encode_all(model.vocab, first));
        const Matrix B = embed_sequences(model.params, encode_all(model.vocab, second));
        std::vector<double> s;
        for (Eigen::Index i = 0; i < A.rows(); ++i) s.push_back(cosine(A.row(i), B.row(i)));
        return s;
    };
    std::vector<int> dev_labels, test_labels;
    const auto dev = scores_of(files().dev_path, dev_labels);
    const auto test = scores_of(files().test_path, test_labels);
    const ThresholdResult th = threshold_search(dev, dev_labels, 0.01);
    const PairClassification pc = pair_classification(test, test_labels, th.threshold);
    CHECK(r.out.find("threshold=" + format_double(th.threshold) + "\n") == 0);
    CHECK(r.out.find("\naccuracy=" + format_double(pc.accuracy) + "\n") != std::string::npos);
    CHECK(r.out.find("\nf1=" + format_double(pc.f1) + "\n") != std::string::npos);
    CHECK(r.out.find("\ntp=" + std::to_string(pc.tp) + "\n") != std::string::npos);
}

TEST_CASE("config file values apply and flags override them") {
    const std::string cfg = write_file("run.cfg", "# comment\nseed=5\nsteps=3\nloss=contrastive\nfilter=on\nclasses-per-batch=4\n");
    const std::string a = (workdir() / "cfg_a.ckpt").string();
    const std::string b = (workdir() / "cfg_b.ckpt").string();
    REQUIRE(run_cli({"train", "--config", cfg, "--data", files().train_path, "--out", a}).code == 0);
    REQUIRE(run_cli({"train", "--config", cfg, "--data", files().train_path, "--out", b, "--seed", "6"}).code == 0);
    const Checkpoint ca = load_checkpoint(a);
    const Checkpoint cb = load_checkpoint(b);
    CHECK(ca.meta_value("seed") == std::optional<std::string>("5"));
    CHECK(cb.meta_value("seed") == std::optional<std::string>("6"));
    CHECK(ca.meta_value("steps") == std::optional<std::string>("3"));
    CHECK(ca.meta_value("filter") == std::optional<std::string>("on"));
    CHECK(ca.loss == LossKind::contrastive);
}

TEST_CASE("identical runs write identical checkpoints") {
    const std::string a = (workdir() / "same_a.ckpt").string();
    const std::string b = (workdir() / "same_b.ckpt").string();
    REQUIRE(run_cli(train_args(a)).code == 0);
    REQUIRE(run_cli(train_args(b)).code == 0);
    CHECK(read_text_file(a) == read_text_file(b));
    CHECK(read_text_file(a + ".metrics") == read_text_file(b + ".metrics"));
}

TEST_CASE("usage and config errors exit with 2") {
    Result r = run_cli({"train", "--no-such-flag"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--no-such-flag") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);

    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"train", "--loss", "npair"}).code == 2);
    CHECK(run_cli({"train", "--data", files().train_path}).code == 2);  // no --out

    r = run_cli({"train", "--data", files().train_path, "--out", "x.ckpt", "--alpha", "-1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("alpha") != std::string::npos);

    const std::string bad = write_file("bad.cfg", "seed=1\nmystery=3\n");
    r = run_cli({"train", "--config", bad, "--data", files().train_path, "--out", "x.ckpt"});
    CHECK(r.code == 2);
    CHECK(r.err.find("mystery") != std::string::npos);

    CHECK(run_cli({"threshold", "--data", "x", "--grid-step", "1.5"}).code == 2);
    CHECK(run_cli({"search", "--checkpoint", "x", "--data", "y", "--hit-n", "0"}).code == 2);

    r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("eval-pairs") != std::string::npos);
}

TEST_CASE("data errors exit with 3 and name the row") {
    const std::string bad = write_file("bad_rows.tsv", "w1 w2\t0\n\nw3\tnot-a-class\n");
    Result r = run_cli({"train", "--data", bad, "--out", (workdir() / "never.ckpt").string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("row 3") != std::string::npos);
    CHECK_FALSE(fs::exists(workdir() / "never.ckpt"));

    r = run_cli({"eval-triplets", "--checkpoint", (workdir() / "missing.ckpt").string(), "--data", bad});
    CHECK(r.code == 3);

    const std::string junk = write_file("junk.ckpt", "not a checkpoint\n");
    r = run_cli({"eval-triplets", "--checkpoint", junk, "--data", files().triplets_path});
    CHECK(r.code == 3);
    CHECK(r.err.find("SENTPW 1") != std::string::npos);
}

TEST_CASE("search, embed, project and threshold outputs") {
    const std::string ckpt = (workdir() / "tools_model.ckpt").string();
    REQUIRE(run_cli(train_args(ckpt)).code == 0);
    const std::string queries = write_file("queries.tsv", to_tsv(files().held_out));

    Result r = run_cli({"search", "--checkpoint", ckpt, "--data", queries, "--hit-n", "1,3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("hit@1=") == 0);
    CHECK(r.out.find("\nhit@3=") != std::string::npos);
    CHECK(r.out.find("evaluated=24\n") != std::string::npos);

    r = run_cli({"search", "--checkpoint", ckpt, "--data", queries, "--gallery", files().train_path});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("flagged=0\n") != std::string::npos);

    const std::string lines = write_file("lines.txt", "w1 w2 w3\n\nw4\n");
    r = run_cli({"embed", "--checkpoint", ckpt, "--data", lines});
    REQUIRE(r.code == 0);
    std::istringstream rows(r.out);
    std::string row;
    int count = 0;
    while (std::getline(rows, row)) {
        ++count;
        CHECK(std::count(row.begin(), row.end(), ',') == 7);
    }
    CHECK(count == 2);

    const std::string csv = (workdir() / "proj.csv").string();
    r = run_cli({"project", "--checkpoint", ckpt, "--data", queries, "--kind", "classes", "--out", csv});
    REQUIRE(r.code == 0);
    const std::string text = read_text_file(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 24);
    CHECK(text.substr(0, 2) == std::to_string(files().held_out.classes.front().class_id) + ",");

    const std::string scores = write_file("scores.tsv", "0.9\t1\n0.7\t1\n0.6\t0\n0.2\t0\n");
    r = run_cli({"threshold", "--data", scores, "--grid-step", "0.05"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "threshold=0.6\naccuracy=1\nscores=4\n");
}
