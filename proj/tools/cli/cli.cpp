#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sentpw/checkpoint.hpp"
#include "sentpw/dataset.hpp"
#include "sentpw/encoder.hpp"
#include "sentpw/errors.hpp"
#include "sentpw/eval.hpp"
#include "sentpw/numfmt.hpp"
#include "sentpw/tokenizer.hpp"
#include "sentpw/trainer.hpp"
#include "sentpw/tsv.hpp"
#include "sentpw/vocabulary.hpp"

namespace sentpw::cli {

namespace {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Every flag, bound on the top-level app so that config-file keys and flags
// share one namespace. Unset optionals fall back to the library defaults.
struct Options {
    std::string data, dev, test, gallery, checkpoint, out, metrics, pretrained;
    std::string kind;
    std::string loss = "multisim";
    std::string filter;  // on | off, empty = loss default
    std::string tokenize;
    std::string optimizer = "adam";
    std::string hard_mode = "hardest";
    TrainConfig train;
    int min_count = 1;
    double grid_step = kDefaultGridStep;
    std::vector<std::size_t> hit_n{1};
};

void add_options(CLI::App& app, Options& o) {
    TrainConfig& t = o.train;
    const auto kinds = CLI::IsMember({"classes", "pairs", "triplets", "poi", "lines", "scores"});

    app.add_option("--data", o.data, "Input file (training data, or the records to evaluate)");
    app.add_option("--dev", o.dev, "Pair file used to choose the threshold (eval-pairs)");
    app.add_option("--test", o.test, "Pair file scored at the chosen threshold (eval-pairs)");
    app.add_option("--gallery", o.gallery, "Gallery file for search (default: --data, self excluded)");
    app.add_option("--checkpoint", o.checkpoint, "Trained checkpoint to load");
    app.add_option("--out", o.out, "Output path (checkpoint for train, CSV for embed/project)");
    app.add_option("--metrics", o.metrics, "Write per-step training metrics here instead of stdout");
    app.add_option("--pretrained", o.pretrained, "Word vectors (`token v1 ... vd` lines) for init");
    app.add_option("--kind", o.kind, "Input format: classes, pairs, triplets, poi, lines, scores")
        ->check(kinds);
    app.add_option("--tokenize", o.tokenize, "whitespace or per_char (default: from checkpoint)")
        ->check(CLI::IsMember({"whitespace", "per_char"}));
    app.add_option("--loss", o.loss, "contrastive, triplet or multisim")
        ->check(CLI::IsMember({"contrastive", "triplet", "multisim"}));
    app.add_option("--filter", o.filter, "Informative-pair filter on|off (default: on for multisim)")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--alpha", t.loss_cfg.alpha, "Multi-similarity positive scale");
    app.add_option("--beta", t.loss_cfg.beta, "Multi-similarity negative scale");
    app.add_option("--lambda", t.loss_cfg.lambda_ms, "Multi-similarity offset");
    app.add_option("--margin", t.loss_cfg.lambda_c, "Contrastive negative margin");
    app.add_option("--epsilon", t.mining.epsilon, "Informative-pair filter slack");
    app.add_option("--classes-per-batch", t.mining.classes_per_batch, "P in P x K sampling");
    app.add_option("--samples-per-class", t.mining.samples_per_class, "K in P x K sampling");
    app.add_option("--hard-mode", o.hard_mode, "Triplet mining: hardest or semi_hard")
        ->check(CLI::IsMember({"hardest", "semi_hard"}));
    app.add_option("--optimizer", o.optimizer, "adam or sgd_momentum")
        ->check(CLI::IsMember({"adam", "sgd_momentum"}));
    app.add_option("--lr", t.optimizer.learning_rate, "Learning rate");
    app.add_option("--momentum", t.optimizer.momentum, "Momentum (sgd_momentum)");
    app.add_option("--beta1", t.optimizer.beta1, "Adam first-moment decay");
    app.add_option("--beta2", t.optimizer.beta2, "Adam second-moment decay");
    app.add_option("--adam-eps", t.optimizer.eps, "Adam denominator epsilon");
    app.add_option("--epochs", t.epochs, "Training epochs");
    app.add_option("--steps", t.steps_per_epoch, "Steps per epoch");
    app.add_option("--seed", t.seed, "Random seed");
    app.add_option("--d-in", t.d_in, "Word embedding dimension");
    app.add_option("--d-out", t.d_out, "Sentence embedding dimension");
    app.add_option("--min-count", o.min_count, "Minimum token count for the vocabulary");
    app.add_option("--threads", t.threads, "Worker threads for data-parallel sections");
    app.add_option("--grid-step", o.grid_step, "Threshold grid step in (0, 1)");
    app.add_option("--hit-n", o.hit_n, "Cut-offs for Hit@n (repeat or comma separate)")
        ->delimiter(',');
}

std::string require(const std::string& value, const char* flag, const char* command) {
    if (value.empty()) {
        throw ConfigError(std::string(command) + " needs " + flag);
    }
    return value;
}

void echo_config(std::ostream& err, const KeyValues& kv) {
    err << "# resolved config\n";
    for (const auto& [k, v] : kv) err << k << '=' << v << '\n';
}

// Writes to `path`, or to `out` when no path is given.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << text;
    if (!f) throw DataError("failed writing '" + path + "'");
}

Dataset load_training_data(const Options& o, TokenizeMode mode) {
    if (o.kind == "poi") return load_poi_dataset(o.data);
    if (o.kind == "lines" || o.kind == "scores") {
        throw ConfigError("--kind " + o.kind + " cannot be used for training");
    }
    return load_dataset(o.data, parse_dataset_kind(o.kind.empty() ? "classes" : o.kind), mode);
}

TrainConfig resolve_train_config(const Options& o) {
    TrainConfig cfg = o.train;
    cfg.loss = parse_loss_kind(o.loss);
    cfg.optimizer.kind = parse_optimizer_kind(o.optimizer);
    cfg.mining.hard_mode = parse_hard_mode(o.hard_mode);
    cfg.filter = o.filter.empty() ? default_filter(cfg.loss) : o.filter == "on";
    cfg.validate();
    return cfg;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.data, "--data", "train");
    require(o.out, "--out", "train");
    const TrainConfig cfg = resolve_train_config(o);
    const bool poi = o.kind == "poi";
    const TokenizeMode mode =
        poi ? TokenizeMode::per_char : parse_tokenize_mode(o.tokenize.empty() ? "whitespace" : o.tokenize);
    const std::string kind = o.kind.empty() ? "classes" : o.kind;

    KeyValues resolved = cfg.describe();
    resolved.insert(resolved.end(), {{"data", o.data},
                                     {"kind", kind},
                                     {"tokenize", std::string(to_string(mode))},
                                     {"min-count", std::to_string(o.min_count)},
                                     {"threads", std::to_string(cfg.threads)}});
    if (!o.pretrained.empty()) resolved.emplace_back("pretrained", o.pretrained);
    KeyValues echoed = resolved;
    echoed.emplace_back("out", o.out);
    echo_config(err, echoed);

    const Dataset dataset = load_training_data(o, mode);
    const auto sentences = dataset.sentences();
    const Vocabulary vocab = build_vocab(sentences, o.min_count);
    const TrainingSet set = make_training_set(dataset, vocab, cfg.loss);
    std::optional<PretrainedTable> pretrained;
    if (!o.pretrained.empty()) pretrained = load_pretrained(o.pretrained);

    std::unique_ptr<std::ofstream> metrics_file;
    std::ostream* metrics = &out;
    if (!o.metrics.empty()) {
        metrics_file = std::make_unique<std::ofstream>(o.metrics, std::ios::binary);
        if (!*metrics_file) throw DataError("cannot write '" + o.metrics + "'");
        metrics = metrics_file.get();
    }
    *metrics << "step\tloss\tkept_fraction\tmean_pos_sim\tmean_neg_sim\n";
    FitResult result = fit(cfg, vocab, set, metrics, pretrained ? &*pretrained : nullptr);

    Checkpoint ckpt{vocab, std::move(result.state.params), cfg.loss, resolved};
    ckpt.meta.emplace_back("step", std::to_string(result.state.step));
    save_checkpoint(ckpt, o.out);
    out << "steps=" << result.state.step << '\n';
    if (!result.log.empty()) out << "final_loss=" << format_double(result.log.back().loss) << '\n';
    out << "checkpoint=" << o.out << '\n';
    return kOk;
}

// A checkpoint plus the tokenization used to build its vocabulary.
struct Model {
    Checkpoint ckpt;
    TokenizeMode mode = TokenizeMode::whitespace;
    int threads = 1;

    std::vector<TokenId> encode(const Sentence& s) const { return ckpt.vocab.encode(s.tokens); }
    Matrix embed(const std::vector<std::vector<TokenId>>& seqs) const {
        return embed_sequences(ckpt.params, seqs, threads);
    }
};

Model load_model(const Options& o, const char* command) {
    Model m;
    m.ckpt = load_checkpoint(require(o.checkpoint, "--checkpoint", command));
    if (!o.tokenize.empty()) {
        m.mode = parse_tokenize_mode(o.tokenize);
    } else if (auto stored = m.ckpt.meta_value("tokenize")) {
        m.mode = parse_tokenize_mode(*stored);
    }
    m.threads = o.train.threads;
    if (m.threads < 1) throw ConfigError("threads must be >= 1");
    return m;
}

KeyValues model_config(const Options& o, const Model& m) {
    return {{"checkpoint", o.checkpoint},
            {"tokenize", std::string(to_string(m.mode))},
            {"threads", std::to_string(m.threads)}};
}

// Sequences and labels of a classes or POI file; labels are -1 for plain lines.
struct Records {
    std::vector<std::vector<TokenId>> seqs;
    std::vector<int> labels;
    bool labelled = true;
};

Records load_records(const std::string& path, const std::string& kind, const Model& m) {
    Records r;
    if (kind == "lines") {
        r.labelled = false;
        for_each_row(read_text_file(path), [&](std::size_t row, const std::vector<std::string_view>& fields) {
            std::string text;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) text += '\t';
                text += fields[i];
            }
            try {
                r.seqs.push_back(m.encode(make_sentence(text, m.mode)));
            } catch (const std::invalid_argument& e) {
                throw DataError(e.what(), row);
            }
            r.labels.push_back(-1);
        });
        return r;
    }
    Dataset ds;
    if (kind == "poi") {
        ds = load_poi_dataset(path);
    } else if (kind == "classes") {
        ds = load_dataset(path, DatasetKind::classes, m.mode);
    } else {
        throw ConfigError("--kind must be classes, poi or lines here, got '" + kind + "'");
    }
    for (const auto& rec : ds.classes) {
        r.seqs.push_back(m.encode(rec.sentence));
        r.labels.push_back(rec.class_id);
    }
    return r;
}

int cmd_eval_pairs(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.dev, "--dev", "eval-pairs");
    require(o.test, "--test", "eval-pairs");
    const Model m = load_model(o, "eval-pairs");
    KeyValues resolved = model_config(o, m);
    resolved.insert(resolved.end(), {{"dev", o.dev}, {"test", o.test}, {"grid-step", format_double(o.grid_step)}});
    echo_config(err, resolved);

    auto score = [&](const std::string& path, std::vector<double>& scores, std::vector<int>& labels) {
        const Dataset ds = load_dataset(path, DatasetKind::pairs, m.mode);
        std::vector<std::vector<TokenId>> firsts, seconds;
        for (const auto& p : ds.pairs) {
            firsts.push_back(m.encode(p.first));
            seconds.push_back(m.encode(p.second));
            labels.push_back(p.label);
        }
        const Matrix A = m.embed(firsts);
        const Matrix B = m.embed(seconds);
        for (Eigen::Index i = 0; i < A.rows(); ++i) scores.push_back(cosine(A.row(i), B.row(i)));
        if (scores.empty()) throw DataError("'" + path + "' has no pairs");
    };
    std::vector<double> dev_scores, test_scores;
    std::vector<int> dev_labels, test_labels;
    score(o.dev, dev_scores, dev_labels);
    score(o.test, test_scores, test_labels);

    const ThresholdResult th = threshold_search(dev_scores, dev_labels, o.grid_step);
    const PairClassification pc = pair_classification(test_scores, test_labels, th.threshold);
    EvalReport report;
    report.task = "pairs";
    report.add("threshold", th.threshold);
    report.add("dev_accuracy", th.accuracy);
    report.add("accuracy", pc.accuracy);
    report.add("precision", pc.precision);
    report.add("recall", pc.recall);
    report.add("f1", pc.f1);
    report.count("tp", pc.tp);
    report.count("fp", pc.fp);
    report.count("tn", pc.tn);
    report.count("fn", pc.fn);
    out << report.to_text();
    return kOk;
}

int cmd_eval_triplets(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.data, "--data", "eval-triplets");
    const Model m = load_model(o, "eval-triplets");
    KeyValues resolved = model_config(o, m);
    resolved.emplace_back("data", o.data);
    echo_config(err, resolved);

    const Dataset ds = load_dataset(o.data, DatasetKind::triplets, m.mode);
    if (ds.triplets.empty()) throw DataError("'" + o.data + "' has no triplets");
    std::vector<std::vector<TokenId>> a, p, n;
    for (const auto& t : ds.triplets) {
        a.push_back(m.encode(t.anchor));
        p.push_back(m.encode(t.positive));
        n.push_back(m.encode(t.negative));
    }
    EvalReport report;
    report.task = "triplets";
    report.add("accuracy", triplet_accuracy(m.embed(a), m.embed(p), m.embed(n)));
    report.count("triplets", ds.triplets.size());
    out << report.to_text();
    return kOk;
}

int cmd_search(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.data, "--data", "search");
    const Model m = load_model(o, "search");
    const std::string kind = o.kind.empty() ? "classes" : o.kind;
    KeyValues resolved = model_config(o, m);
    std::string ns;
    for (std::size_t n : o.hit_n) ns += (ns.empty() ? "" : ",") + std::to_string(n);
    resolved.insert(resolved.end(), {{"data", o.data},
                                     {"gallery", o.gallery.empty() ? o.data : o.gallery},
                                     {"kind", kind},
                                     {"hit-n", ns}});
    echo_config(err, resolved);

    const Records queries = load_records(o.data, kind, m);
    if (!queries.labelled) throw ConfigError("search needs labelled records (--kind classes or poi)");
    const Matrix Q = m.embed(queries.seqs);
    std::vector<HitReport> hits;
    if (o.gallery.empty()) {
        std::vector<std::optional<std::size_t>> self(queries.seqs.size());
        for (std::size_t i = 0; i < self.size(); ++i) self[i] = i;
        hits = hit_at_n(Q, Q, queries.labels, queries.labels, o.hit_n, self, m.threads);
    } else {
        const Records gallery = load_records(o.gallery, kind, m);
        hits = hit_at_n(Q, m.embed(gallery.seqs), queries.labels, gallery.labels, o.hit_n, {}, m.threads);
    }
    EvalReport report;
    report.task = "search";
    for (const HitReport& h : hits) report.add("hit@" + std::to_string(h.n), h.hit_rate);
    report.count("evaluated", hits.front().evaluated);
    report.count("flagged", hits.front().flagged);
    out << report.to_text();
    return kOk;
}

std::string to_csv(const Matrix& X, const std::vector<int>* labels) {
    std::string text;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (labels) text += std::to_string((*labels)[static_cast<std::size_t>(i)]) + ',';
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (j) text += ',';
            text += format_double(X(i, j));
        }
        text += '\n';
    }
    return text;
}

int cmd_embed(const Options& o, std::ostream& out, std::ostream& err, bool project) {
    const char* name = project ? "project" : "embed";
    require(o.data, "--data", name);
    const Model m = load_model(o, name);
    const std::string kind = o.kind.empty() ? "lines" : o.kind;
    KeyValues resolved = model_config(o, m);
    resolved.insert(resolved.end(), {{"data", o.data}, {"kind", kind}, {"out", o.out}});
    echo_config(err, resolved);

    const Records r = load_records(o.data, kind, m);
    const Matrix V = m.embed(r.seqs);
    const std::vector<int>* labels = r.labelled ? &r.labels : nullptr;
    emit(to_csv(project ? pca2d(V) : V, labels), o.out, out);
    return kOk;
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.data, "--data", "threshold");
    echo_config(err, {{"data", o.data}, {"grid-step", format_double(o.grid_step)}});
    std::vector<double> scores;
    std::vector<int> labels;
    for_each_row(read_text_file(o.data), [&](std::size_t row, const std::vector<std::string_view>& f) {
        if (f.size() != 2) {
            throw DataError("expected 2 tab-separated fields (score, label), got " + std::to_string(f.size()), row);
        }
        scores.push_back(parse_double_field(f[0], "score", row));
        const int label = parse_int_field(f[1], "label", row);
        if (label != 0 && label != 1) throw DataError("label must be 0 or 1", row);
        labels.push_back(label);
    });
    if (scores.empty()) throw DataError("'" + o.data + "' has no scores");
    const ThresholdResult th = threshold_search(scores, labels, o.grid_step);
    EvalReport report;
    report.task = "threshold";
    report.add("threshold", th.threshold);
    report.add("accuracy", th.accuracy);
    report.count("scores", scores.size());
    out << report.to_text();
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sentence metric learning with pair-based losses", "sentpw"};
    app.set_config("--config", "", "key=value config file; flags override its values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    Options o;
    add_options(app, o);
    struct Command {
        const char* name;
        const char* help;
    };
    const Command commands[] = {
        {"train", "Train an encoder and write a checkpoint"},
        {"eval-pairs", "Pick a threshold on --dev, report pair classification on --test"},
        {"eval-triplets", "Triplet accuracy on a triplet file"},
        {"search", "Hit@n retrieval over labelled records"},
        {"embed", "Write sentence embeddings as CSV"},
        {"project", "Write 2-D PCA coordinates of the embeddings as CSV"},
        {"threshold", "Best threshold for a score/label file"},
    };
    for (const Command& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (!(o.grid_step > 0.0 && o.grid_step < 1.0)) throw ConfigError("--grid-step must be in (0, 1)");
        for (std::size_t n : o.hit_n) {
            if (n == 0) throw ConfigError("--hit-n values must be >= 1");
        }
        if (o.hit_n.empty()) throw ConfigError("--hit-n needs at least one value");
        if (command == "train") return cmd_train(o, out, err);
        if (command == "eval-pairs") return cmd_eval_pairs(o, out, err);
        if (command == "eval-triplets") return cmd_eval_triplets(o, out, err);
        if (command == "search") return cmd_search(o, out, err);
        if (command == "embed") return cmd_embed(o, out, err, false);
        if (command == "project") return cmd_embed(o, out, err, true);
        return cmd_threshold(o, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"sentpw"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sentpw::cli
