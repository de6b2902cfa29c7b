#include <set>
#include <stdexcept>

#include "bnn/ml/dataset.hpp"
#include "bnn/ml/evaluate.hpp"
#include "bnn/ml/grid_search.hpp"
#include "bnn/ml/mlp_net.hpp"
#include "bnn/ml/model.hpp"
#include "bnn/rng.hpp"
#include "test_util.hpp"

using namespace bnn;
using namespace bnn::ml;

namespace {

sim::ArrivalTrace make_trace(std::vector<int> bins, int n_legit) {
    sim::ArrivalTrace t;
    t.bins = std::move(bins);
    t.n_legit = n_legit;
    t.sampling_period = 10.0;
    return t;
}

Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// two well-separated centered 2-D blobs (the pipeline standardizes its
// features, so models see data shaped like this); label 1 sits top-right
Dataset toy_blobs(Index per_class, std::uint64_t seed, double gap = 4.0) {
    Rng rng(seed);
    Dataset ds;
    ds.X.resize(2 * per_class, 2);
    ds.y.resize(2 * per_class);
    for (Index i = 0; i < per_class; ++i) {
        ds.X(i, 0) = -gap / 2 + rng.normal(0.0, 1.0);
        ds.X(i, 1) = -gap / 2 + rng.normal(0.0, 1.0);
        ds.y[i] = 0;
        ds.X(per_class + i, 0) = gap / 2 + rng.normal(0.0, 1.0);
        ds.X(per_class + i, 1) = gap / 2 + rng.normal(0.0, 1.0);
        ds.y[per_class + i] = 1;
    }
    return ds;
}

void feature_extraction() {
    const auto t = make_trace({1, 0, 2}, 5);
    const Vec count = extract_features(t, FeatureKind::count);
    CHECK(count == vec({1, 0, 2}));
    const Vec sum = extract_features(t, FeatureKind::sum);
    CHECK(sum == vec({1, 1, 3}));

    const Vec sample = extract_features(make_trace({1, 1, 2}, 2), FeatureKind::sample);
    CHECK(sample.size() == 3);
    CHECK(sample[0] == 0.0);
    CHECK_NEAR(sample[1], 2.0 / 3.0, 1e-15);
    CHECK_NEAR(sample[2], 1.0 / 3.0, 1e-15);

    CHECK(to_string(FeatureKind::sample) == "sample");
    CHECK(feature_kind_from_string("sum") == FeatureKind::sum);
    CHECK_THROWS(std::invalid_argument, feature_kind_from_string("bogus"));
}

void preprocessing() {
    {
        const auto r = preprocess({vec({0, 1, 0}), vec({0, 2, 0})}, {0, 1},
                                  FeatureKind::count, 10.0);
        CHECK(r.dataset.cols() == 1); // edge zero columns trimmed
        CHECK_NEAR(r.dataset.X.col(0).mean(), 0.0, 1e-12);
        CHECK_NEAR(r.dataset.X(0, 0), -1.0, 1e-12); // (1-1.5)/0.5
        CHECK_NEAR(r.dataset.X(1, 0), 1.0, 1e-12);
    }
    {
        // ragged vectors are right-padded before trimming
        const auto r = preprocess({vec({1, 2}), vec({1, 2, 3})}, {0, 1},
                                  FeatureKind::sample, 10.0);
        CHECK(r.stats.pad_length == 3);
        CHECK(r.dataset.cols() == 3);
    }
    {
        // interior all-zero columns survive the trim
        const auto r = preprocess({vec({1, 0, 2}), vec({3, 0, 4})}, {0, 1},
                                  FeatureKind::count, 10.0);
        CHECK(r.dataset.cols() == 3);
        CHECK(r.dataset.X(0, 1) == 0.0); // constant column: centered, scale 1
    }
    {
        // standardized columns: mean 0, population sd 1
        Rng rng(3);
        std::vector<Vec> raw;
        for (int i = 0; i < 50; ++i) {
            Vec v(4);
            for (Index c = 0; c < 4; ++c) v[c] = rng.normal(2.0, 3.0);
            raw.push_back(v);
        }
        const auto r = preprocess(raw, std::vector<int>(50, 1), FeatureKind::count, 10.0);
        for (Index c = 0; c < r.dataset.cols(); ++c) {
            const auto col = r.dataset.X.col(c).array();
            CHECK_NEAR(col.mean(), 0.0, 1e-9);
            CHECK_NEAR(std::sqrt(col.square().mean()), 1.0, 1e-9);
        }
    }
    CHECK_THROWS(std::invalid_argument,
                 preprocess({vec({0, 0}), vec({0, 0})}, {0, 1}, FeatureKind::count, 10.0));
    CHECK_THROWS(std::invalid_argument, Preprocessor::fit({}));

    // transform applies stored statistics; feeding other rows cannot move them
    const std::vector<Vec> train_raw = {vec({1, 5}), vec({3, 9})};
    const Preprocessor stats = Preprocessor::fit(train_raw);
    const Vec mean_before = stats.col_mean;
    const Mat test = stats.transform({vec({100, -50})});
    CHECK(stats.col_mean == mean_before);
    CHECK_NEAR(test(0, 0), (100.0 - 2.0) / 1.0, 1e-12); // train stats, not test stats
}

void splitting() {
    Dataset ds = toy_blobs(50, 21); // 100 rows, 50/50
    const auto [train, test] = split(ds, 0.7, 9);
    CHECK(train.rows() == 70);
    CHECK(test.rows() == 30);
    CHECK((train.y.array() == 0).count() == 35);
    CHECK((test.y.array() == 1).count() == 15);

    const auto [train2, test2] = split(ds, 0.7, 9);
    CHECK(train.X == train2.X);
    CHECK(test.y == test2.y);
    const auto [train3, test3] = split(ds, 0.7, 10);
    CHECK(train3.X != train.X);

    // extreme fraction still leaves one of each class on both sides
    Dataset tiny = toy_blobs(5, 22);
    const auto [t9, t1] = split(tiny, 0.999, 3);
    CHECK((t9.y.array() == 0).any() && (t9.y.array() == 1).any());
    CHECK((t1.y.array() == 0).any() && (t1.y.array() == 1).any());

    CHECK_THROWS(std::invalid_argument, split(ds, 0.0, 1));
    CHECK_THROWS(std::invalid_argument, split(ds, 1.0, 1));

    Dataset one;
    one.X = Mat::Zero(1, 2);
    one.y = IntVec::Zero(1);
    CHECK_THROWS(std::invalid_argument, split(one, 0.7, 1));
}

void kfold_assignment() {
    Dataset ds = toy_blobs(50, 23);
    const auto fold = stratified_fold_ids(ds.y, 5, 77);
    std::vector<int> sizes(5, 0);
    for (Index i = 0; i < ds.rows(); ++i) {
        CHECK(fold[static_cast<std::size_t>(i)] >= 0 && fold[static_cast<std::size_t>(i)] < 5);
        ++sizes[static_cast<std::size_t>(fold[static_cast<std::size_t>(i)])];
    }
    for (int s : sizes) CHECK(s == 20); // every row validated exactly once

    IntVec skew(10);
    skew << 0, 0, 0, 0, 0, 0, 0, 0, 1, 1; // class 1 smaller than k
    CHECK_THROWS(std::invalid_argument, stratified_fold_ids(skew, 5, 1));
    CHECK_THROWS(std::invalid_argument, stratified_fold_ids(skew, 1, 1));
}

void logistic_contract() {
    Dataset ds = toy_blobs(20, 31);
    const auto model = train({Algorithm::logistic_regression, {}}, ds, 1);
    const Vec s = model->predict_scores(ds.X);
    long correct = 0;
    for (Index i = 0; i < ds.rows(); ++i)
        correct += (s[i] >= 0.5 ? 1 : 0) == ds.y[i];
    CHECK(correct == ds.rows()); // separable blobs: training accuracy 1.0

    CHECK((s.array() >= 0.0).all() && (s.array() <= 1.0).all());
    CHECK(model->predict_scores(Mat(0, 2)).size() == 0);
    CHECK_THROWS(std::invalid_argument, model->predict_scores(Mat::Zero(3, 5)));

    Dataset single = ds;
    single.y.setConstant(1);
    CHECK_THROWS(std::invalid_argument, train({Algorithm::logistic_regression, {}}, single, 1));
}

void knn_contract() {
    Dataset ds = toy_blobs(15, 32);
    ClassifierSpec one{Algorithm::knn, {{"n_neighbors", 1}}};
    const auto nn1 = train(one, ds, 5);
    const Vec s1 = nn1->predict_scores(ds.X);
    for (Index i = 0; i < ds.rows(); ++i)
        CHECK(s1[i] == static_cast<double>(ds.y[i])); // own nearest neighbor

    ClassifierSpec five{Algorithm::knn, {{"n_neighbors", 5}, {"weights", std::string("uniform")}}};
    const auto nn5 = train(five, ds, 5);
    const Vec s5 = nn5->predict_scores(ds.X);
    const std::set<double> allowed = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    for (Index i = 0; i < s5.size(); ++i) CHECK(allowed.count(s5[i]) == 1);

    ClassifierSpec big{Algorithm::knn, {{"n_neighbors", 1000}}};
    CHECK_THROWS(std::invalid_argument, train(big, ds, 5));
}

void svm_contract() {
    Dataset ds = toy_blobs(25, 33);
    for (const char* kernel : {"linear", "rbf"}) {
        ClassifierSpec spec{Algorithm::svm,
                            {{"kernel", std::string(kernel)}, {"C", 1.0}, {"max_iter", 2000}}};
        const auto model = train(spec, ds, 11);
        const Vec s = model->predict_scores(ds.X);
        CHECK((s.array() >= 0.0).all() && (s.array() <= 1.0).all());
        long correct = 0;
        for (Index i = 0; i < ds.rows(); ++i)
            correct += (s[i] >= 0.5 ? 1 : 0) == ds.y[i];
        CHECK(correct >= ds.rows() - 2); // wide-margin blobs
        const auto again = train(spec, ds, 11);
        CHECK(again->predict_scores(ds.X) == s);
    }
    CHECK_THROWS(std::invalid_argument,
                 train({Algorithm::svm, {{"kernel", std::string("poly")}}}, ds, 1));
}

void forest_contract() {
    Dataset ds = toy_blobs(25, 34);
    ClassifierSpec spec{Algorithm::random_forest,
                        {{"n_estimators", 100}, {"max_features", std::string("sqrt")}}};
    const auto a = train(spec, ds, 42);
    const auto b = train(spec, ds, 42);
    CHECK(a->predict_scores(ds.X) == b->predict_scores(ds.X)); // same seed, bit-equal

    const auto c = train(spec, ds, 43);
    const Vec sa = a->predict_scores(ds.X);
    CHECK((sa.array() >= 0.0).all() && (sa.array() <= 1.0).all());
    long correct = 0;
    for (Index i = 0; i < ds.rows(); ++i)
        correct += (sa[i] >= 0.5 ? 1 : 0) == ds.y[i];
    CHECK(correct == ds.rows());
    (void)c;
}

void mlp_contract_and_gradients() {
    Dataset ds = toy_blobs(25, 35);
    ClassifierSpec spec{Algorithm::mlp,
                        {{"hidden_layer_sizes", std::string("10")},
                         {"learning_rate_init", 1e-2}}};
    const auto a = train(spec, ds, 17);
    const auto b = train(spec, ds, 17);
    CHECK(a->predict_scores(ds.X) == b->predict_scores(ds.X));
    const Vec s = a->predict_scores(ds.X);
    CHECK((s.array() >= 0.0).all() && (s.array() <= 1.0).all());
    long correct = 0;
    for (Index i = 0; i < ds.rows(); ++i)
        correct += (s[i] >= 0.5 ? 1 : 0) == ds.y[i];
    CHECK(correct >= ds.rows() - 1);

    // analytic gradient vs central differences on a 3-unit hidden layer
    Rng rng(99);
    MlpNet net = MlpNet::init(4, {3}, rng);
    Mat X(6, 4);
    Vec y(6);
    for (Index r = 0; r < 6; ++r) {
        for (Index c = 0; c < 4; ++c) X(r, c) = rng.normal(0.0, 1.0);
        y[r] = r % 2;
    }
    Vec grad(net.param_count());
    net.loss_and_grad(X, y, grad);
    const double h = 1e-6;
    double worst = 0.0;
    Vec dummy(net.param_count());
    for (Index i = 0; i < net.param_count(); ++i) {
        MlpNet plus = net, minus = net;
        plus.params[i] += h;
        minus.params[i] -= h;
        const double fd =
            (plus.loss_and_grad(X, y, dummy) - minus.loss_and_grad(X, y, dummy)) / (2.0 * h);
        const double rel = std::abs(fd - grad[i]) / std::max(1e-8, std::abs(fd));
        worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-4);

    CHECK_THROWS(std::invalid_argument,
                 train({Algorithm::mlp, {{"hidden_layer_sizes", std::string("1,2,3")}}}, ds, 1));
}

void model_roundtrip() {
    Dataset ds = toy_blobs(15, 36);
    Mat probe = ds.X.topRows(8);
    const std::vector<ClassifierSpec> specs = {
        {Algorithm::logistic_regression, {}},
        {Algorithm::knn, {{"n_neighbors", 3}, {"weights", std::string("distance")}}},
        {Algorithm::svm, {{"kernel", std::string("rbf")}, {"max_iter", 500}}},
        {Algorithm::random_forest, {{"n_estimators", 20}}},
        {Algorithm::mlp, {{"hidden_layer_sizes", std::string("5")}}},
    };
    for (const auto& spec : specs) {
        const auto model = train(spec, ds, 7);
        const auto reloaded = model_from_json(model->to_json());
        CHECK(reloaded->algorithm() == spec.algorithm);
        CHECK(reloaded->predict_scores(probe) == model->predict_scores(probe));
        // serialized text itself is reproducible
        CHECK(model->to_json().dump() == reloaded->to_json().dump());
    }

    const ClassifierSpec spec{Algorithm::svm, {{"C", 10.0}, {"kernel", std::string("rbf")}}};
    const ClassifierSpec back = spec_from_json(spec_to_json(spec));
    CHECK(back.algorithm == Algorithm::svm);
    CHECK(back.get_double("C", 0.0) == 10.0);
    CHECK(back.get_string("kernel", "") == "rbf");
}

void grid_search_contract() {
    Dataset ds = toy_blobs(30, 37);

    ParamGrid single = {{"n_neighbors", {3}}};
    const auto one = grid_search_cv(ds, Algorithm::knn, single, 5, 9);
    CHECK(one.cells.size() == 1);
    CHECK(one.best.get_int("n_neighbors", 0) == 3);

    const auto res = grid_search_cv(ds, Algorithm::knn, default_grid(Algorithm::knn), 5, 9);
    CHECK(res.cells.size() == 8);
    for (const auto& cell : res.cells) CHECK(res.best_mean_auroc >= cell.mean_auroc);
    for (const auto& cell : res.cells) {
        CHECK(cell.fold_aurocs.size() == 5);
        CHECK(cell.skipped_folds == 0);
    }

    // determinism of the whole search
    const auto res2 = grid_search_cv(ds, Algorithm::knn, default_grid(Algorithm::knn), 5, 9);
    CHECK(res2.best_mean_auroc == res.best_mean_auroc);
    CHECK(spec_to_json(res2.best).dump() == spec_to_json(res.best).dump());

    CHECK_THROWS(std::invalid_argument, grid_search_cv(ds, Algorithm::knn, {}, 5, 9));
    CHECK_THROWS(std::invalid_argument, grid_search_cv(ds, Algorithm::knn, single, 1, 9));
}

} // namespace

int main() {
    feature_extraction();
    preprocessing();
    splitting();
    kfold_assignment();
    logistic_contract();
    knn_contract();
    svm_contract();
    forest_contract();
    mlp_contract_and_gradients();
    model_roundtrip();
    grid_search_contract();
    return testutil::summary("test_ml");
}
