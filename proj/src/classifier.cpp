#include "bandpick/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "bandpick/csv.hpp"
#include "bandpick/errors.hpp"

namespace fs = std::filesystem;

namespace bandpick {

namespace {

int count_classes(const std::vector<int>& y) {
    int max_label = -1;
    for (int l : y) {
        if (l < 0) throw PreconditionError("negative class label");
        max_label = std::max(max_label, l);
    }
    return max_label + 1;
}

// Row of softmax probabilities for one sample, computed with the usual
// max-shift for stability.
void softmax_row(const std::vector<double>& weights, const std::vector<double>& bias, int classes,
                 int features, const FeatureMatrix& x, std::size_t row, std::vector<double>& out) {
    double max_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
        double s = bias[static_cast<std::size_t>(c)];
        const double* w = weights.data() + static_cast<std::size_t>(c) * features;
        for (int f = 0; f < features; ++f) s += w[f] * x.at(row, f);
        out[static_cast<std::size_t>(c)] = s;
        max_score = std::max(max_score, s);
    }
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) {
        double e = std::exp(out[static_cast<std::size_t>(c)] - max_score);
        out[static_cast<std::size_t>(c)] = e;
        sum += e;
    }
    for (int c = 0; c < classes; ++c) out[static_cast<std::size_t>(c)] /= sum;
}

}  // namespace

void ClassifierSpec::validate() const {
    if (epochs < 1) throw PreconditionError("epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw PreconditionError("learning rate must be positive");
    if (l2 < 0.0) throw PreconditionError("l2 must be non-negative");
    if (kind == ClassifierKind::external && backend_command.empty())
        throw PreconditionError("external classifier requires a backend command");
}

FeatureMatrix featurize(const LabeledPatchSet& set, const std::vector<int>& band_subset) {
    if (band_subset.empty()) throw PreconditionError("band subset is empty");
    for (int b : band_subset) {
        if (b < 0 || b >= set.bands()) throw PreconditionError("band index out of range");
    }
    FeatureMatrix out;
    out.n = static_cast<std::size_t>(set.size());
    out.cols = static_cast<int>(band_subset.size());
    out.values.resize(out.n * static_cast<std::size_t>(out.cols));
    std::size_t px = set.pixels_per_patch();
    double inv_px = 1.0 / static_cast<double>(px);
    for (int p = 0; p < set.size(); ++p) {
        const float* data = set.patch_data(p);
        for (int f = 0; f < out.cols; ++f) {
            int b = band_subset[static_cast<std::size_t>(f)];
            double sum = 0.0;
            for (std::size_t i = 0; i < px; ++i)
                sum += data[i * static_cast<std::size_t>(set.bands()) + static_cast<std::size_t>(b)];
            out.values[static_cast<std::size_t>(p) * out.cols + static_cast<std::size_t>(f)] =
                sum * inv_px;
        }
    }
    return out;
}

double cross_entropy_loss(const std::vector<double>& weights, const std::vector<double>& bias,
                          int classes, int features, const FeatureMatrix& x,
                          const std::vector<int>& y, double l2) {
    std::vector<double> probs(static_cast<std::size_t>(classes));
    double loss = 0.0;
    for (std::size_t r = 0; r < x.n; ++r) {
        softmax_row(weights, bias, classes, features, x, r, probs);
        double p = std::max(probs[static_cast<std::size_t>(y[r])], 1e-300);
        loss -= std::log(p);
    }
    loss /= static_cast<double>(x.n);
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return loss + 0.5 * l2 * penalty;
}

void cross_entropy_grad(const std::vector<double>& weights, const std::vector<double>& bias,
                        int classes, int features, const FeatureMatrix& x,
                        const std::vector<int>& y, double l2,
                        std::vector<double>& grad_weights, std::vector<double>& grad_bias) {
    grad_weights.assign(weights.size(), 0.0);
    grad_bias.assign(bias.size(), 0.0);
    std::vector<double> probs(static_cast<std::size_t>(classes));
    for (std::size_t r = 0; r < x.n; ++r) {
        softmax_row(weights, bias, classes, features, x, r, probs);
        probs[static_cast<std::size_t>(y[r])] -= 1.0;
        for (int c = 0; c < classes; ++c) {
            double g = probs[static_cast<std::size_t>(c)];
            grad_bias[static_cast<std::size_t>(c)] += g;
            double* gw = grad_weights.data() + static_cast<std::size_t>(c) * features;
            for (int f = 0; f < features; ++f) gw[f] += g * x.at(r, f);
        }
    }
    double inv_n = 1.0 / static_cast<double>(x.n);
    for (auto& g : grad_weights) g *= inv_n;
    for (auto& g : grad_bias) g *= inv_n;
    for (std::size_t k = 0; k < weights.size(); ++k) grad_weights[k] += l2 * weights[k];
}

TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& x, const std::vector<int>& y) {
    spec.validate();
    if (x.n == 0 || x.n != y.size()) throw PreconditionError("feature/label size mismatch");
    for (double v : x.values) {
        if (!std::isfinite(v)) throw PreconditionError("non-finite feature value");
    }
    int classes = count_classes(y);
    if (classes < 2) throw PreconditionError("training needs at least 2 classes present");

    TrainedModel model;
    model.kind = ClassifierKind::logistic_baseline;
    model.classes = classes;
    model.features = x.cols;
    model.weights.resize(static_cast<std::size_t>(classes) * x.cols);
    model.bias.assign(static_cast<std::size_t>(classes), 0.0);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> init(0.0, 0.01);
    for (auto& w : model.weights) w = init(rng);

    std::vector<double> grad_w, grad_b;
    std::vector<double> trial_w(model.weights.size());
    std::vector<double> trial_b(model.bias.size());
    double step = spec.learning_rate;
    double loss = cross_entropy_loss(model.weights, model.bias, classes, x.cols, x, y, spec.l2);

    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        cross_entropy_grad(model.weights, model.bias, classes, x.cols, x, y, spec.l2, grad_w, grad_b);
        // Halve the step until the loss stops increasing; a stuck step means
        // we are at numerical convergence for this epoch.
        bool moved = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            for (std::size_t k = 0; k < trial_w.size(); ++k)
                trial_w[k] = model.weights[k] - step * grad_w[k];
            for (std::size_t k = 0; k < trial_b.size(); ++k)
                trial_b[k] = model.bias[k] - step * grad_b[k];
            double trial_loss =
                cross_entropy_loss(trial_w, model.bias = model.bias, classes, x.cols, x, y, spec.l2);
            trial_loss = cross_entropy_loss(trial_w, trial_b, classes, x.cols, x, y, spec.l2);
            if (trial_loss <= loss + 1e-12) {
                model.weights.swap(trial_w);
                model.bias.swap(trial_b);
                loss = trial_loss;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    for (double w : model.weights) {
        if (!std::isfinite(w)) throw Error("training diverged to non-finite weights");
    }
    return model;
}

std::vector<int> predict(const TrainedModel& model, const FeatureMatrix& x) {
    if (x.cols != model.features)
        throw PreconditionError("feature dimension " + std::to_string(x.cols) +
                                " does not match model (" + std::to_string(model.features) + ")");
    std::vector<int> labels(x.n);
    for (std::size_t r = 0; r < x.n; ++r) {
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < model.classes; ++c) {
            double s = model.bias[static_cast<std::size_t>(c)];
            const double* w = model.weights.data() + static_cast<std::size_t>(c) * model.features;
            for (int f = 0; f < model.features; ++f) s += w[f] * x.at(r, f);
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        labels[r] = best;
    }
    return labels;
}

std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& x) {
    if (x.cols != model.features) throw PreconditionError("feature dimension mismatch");
    std::vector<double> out(x.n * static_cast<std::size_t>(model.classes));
    std::vector<double> probs(static_cast<std::size_t>(model.classes));
    for (std::size_t r = 0; r < x.n; ++r) {
        softmax_row(model.weights, model.bias, model.classes, model.features, x, r, probs);
        std::copy(probs.begin(), probs.end(),
                  out.begin() + static_cast<std::ptrdiff_t>(r * model.classes));
    }
    return out;
}

namespace {

void write_protocol_csv(const std::string& path, const FeatureMatrix& x, const std::vector<int>& y) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    for (int f = 0; f < x.cols; ++f) out << 'f' << f << ',';
    out << "label\n";
    for (std::size_t r = 0; r < x.n; ++r) {
        for (int f = 0; f < x.cols; ++f) out << csv::format_double(x.at(r, f)) << ',';
        out << y[r] << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

}  // namespace

std::vector<int> run_external_backend(const std::string& command, const std::string& workdir,
                                      const FeatureMatrix& train_x, const std::vector<int>& train_y,
                                      const FeatureMatrix& val_x, const std::vector<int>& val_y) {
    if (command.empty()) throw PreconditionError("empty backend command");
    fs::create_directories(workdir);
    write_protocol_csv((fs::path(workdir) / "train.csv").string(), train_x, train_y);
    write_protocol_csv((fs::path(workdir) / "val.csv").string(), val_x, val_y);
    fs::remove(fs::path(workdir) / "pred.csv");

    std::string shell_cmd =
        "cd '" + workdir + "' && " + command + " train.csv val.csv pred.csv";
    int status = std::system(shell_cmd.c_str());
    if (status != 0)
        throw BackendError("backend command failed with status " + std::to_string(status) + ": " +
                           command);

    std::ifstream in(fs::path(workdir) / "pred.csv");
    if (!in) throw BackendError("backend produced no pred.csv in " + workdir);
    std::vector<int> preds;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        preds.push_back(static_cast<int>(csv::to_long(line)));
    }
    if (preds.size() != val_x.n)
        throw BackendError("backend predicted " + std::to_string(preds.size()) + " rows, expected " +
                           std::to_string(val_x.n));
    return preds;
}

}  // namespace bandpick
