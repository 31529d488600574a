#ifndef BANDPICK_CLASSIFIER_HPP_
#define BANDPICK_CLASSIFIER_HPP_

#include <string>
#include <vector>

#include "bandpick/datacube.hpp"

namespace bandpick {

enum class ClassifierKind { logistic_baseline, external };

/// Wrapper-classifier configuration. The baseline is a multinomial logistic
/// regression trained by full-batch gradient descent; `external` shells out
/// to backend_command using the CSV protocol (train.csv/val.csv in, pred.csv
/// out), so heavier models can be attached without touching the search.
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::logistic_baseline;
    double learning_rate = 0.1;
    int epochs = 300;
    double l2 = 1e-4;
    std::uint64_t seed = 42;
    std::string backend_command;  // used when kind == external
    std::string backend_workdir;  // scratch root for protocol files

    void validate() const;
};

/// Dense feature matrix: one row per patch, F columns.
struct FeatureMatrix {
    std::vector<double> values;  // row-major n x cols
    std::size_t n = 0;
    int cols = 0;

    double at(std::size_t row, int col) const {
        return values[row * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col)];
    }
};

/// Per patch: the spatial mean of each selected band (F = |band_subset|).
FeatureMatrix featurize(const LabeledPatchSet& set, const std::vector<int>& band_subset);

/// Softmax-regression weights: classes x features, plus one bias per class.
struct TrainedModel {
    ClassifierKind kind = ClassifierKind::logistic_baseline;
    int classes = 0;
    int features = 0;
    std::vector<double> weights;  // row-major classes x features
    std::vector<double> bias;
    std::string feature_recipe = "band_spatial_mean";
};

/// Mean cross-entropy plus 0.5*l2*||W||^2 (biases unpenalized).
double cross_entropy_loss(const std::vector<double>& weights, const std::vector<double>& bias,
                          int classes, int features, const FeatureMatrix& x,
                          const std::vector<int>& y, double l2);

/// Analytic gradient of cross_entropy_loss; laid out as weights then biases.
void cross_entropy_grad(const std::vector<double>& weights, const std::vector<double>& bias,
                        int classes, int features, const FeatureMatrix& x,
                        const std::vector<int>& y, double l2,
                        std::vector<double>& grad_weights, std::vector<double>& grad_bias);

/// Full-batch gradient descent from a seeded random init. The step is halved
/// whenever it would increase the loss, which keeps the training loss
/// non-increasing. Deterministic given the seed.
TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& x, const std::vector<int>& y);

/// Argmax of class scores; ties resolve to the lowest class index.
std::vector<int> predict(const TrainedModel& model, const FeatureMatrix& x);

/// Softmax class probabilities, one row per sample.
std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& x);

/// External backend protocol: writes train.csv and val.csv (header
/// f0..f{F-1},label) into workdir, runs `command train.csv val.csv pred.csv`
/// with workdir as the working directory, and reads one predicted label per
/// validation row from pred.csv. Nonzero exit raises BackendError.
std::vector<int> run_external_backend(const std::string& command, const std::string& workdir,
                                      const FeatureMatrix& train_x, const std::vector<int>& train_y,
                                      const FeatureMatrix& val_x, const std::vector<int>& val_y);

}  // namespace bandpick

#endif  // BANDPICK_CLASSIFIER_HPP_
