#include <numeric>
#include <sstream>

#include "ml_json_util.hpp"
#include "ml_models.hpp"

namespace bnn::ml {

namespace {

double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

} // namespace

MlpNet MlpNet::init(Index n_inputs, const std::vector<Index>& hidden, Rng& rng) {
    MlpNet net;
    net.sizes.push_back(n_inputs);
    for (Index h : hidden) {
        if (h < 1) throw std::invalid_argument("mlp: hidden layer sizes must be >= 1");
        net.sizes.push_back(h);
    }
    net.sizes.push_back(1);
    net.params.resize(net.param_count());
    Index off = 0;
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        const Index in = net.sizes[l], out = net.sizes[l + 1];
        const double s = std::sqrt(6.0 / static_cast<double>(in + out));
        for (Index i = 0; i < in * out; ++i)
            net.params[off + i] = s * (2.0 * rng.uniform() - 1.0);
        off += in * out;
        net.params.segment(off, out).setZero();
        off += out;
    }
    return net;
}

Index MlpNet::param_count() const {
    Index n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
        n += sizes[l] * sizes[l + 1] + sizes[l + 1];
    return n;
}

Vec MlpNet::forward(const Mat& X) const {
    Mat a = X;
    Index off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const Index in = sizes[l], out = sizes[l + 1];
        const Eigen::Map<const Mat> W(params.data() + off, in, out);
        off += in * out;
        const Eigen::Map<const Vec> b(params.data() + off, out);
        off += out;
        Mat z = (a * W).rowwise() + b.transpose();
        a = (l + 2 < sizes.size()) ? z.cwiseMax(0.0) : z; // relu hidden, raw logit out
    }
    return a.col(0);
}

Vec MlpNet::scores(const Mat& X) const {
    const Vec z = forward(X);
    return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

double MlpNet::loss_and_grad(const Mat& X, const Vec& y, Vec& grad) const {
    const Index batch = X.rows();
    const std::size_t layers = sizes.size() - 1;

    std::vector<Mat> activations(layers + 1);
    std::vector<Index> w_off(layers), b_off(layers);
    activations[0] = X;
    Index off = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        const Index in = sizes[l], out = sizes[l + 1];
        w_off[l] = off;
        off += in * out;
        b_off[l] = off;
        off += out;
        const Eigen::Map<const Mat> W(params.data() + w_off[l], in, out);
        const Eigen::Map<const Vec> b(params.data() + b_off[l], out);
        Mat z = (activations[l] * W).rowwise() + b.transpose();
        activations[l + 1] = (l + 1 < layers) ? z.cwiseMax(0.0) : z;
    }

    const Vec logits = activations[layers].col(0);
    double loss = 0.0;
    for (Index i = 0; i < batch; ++i) loss += softplus(logits[i]) - y[i] * logits[i];
    loss /= static_cast<double>(batch);

    grad.setZero(params.size());
    Mat delta = ((1.0 / (1.0 + (-logits.array()).exp())) - y.array()).matrix() /
                static_cast<double>(batch);
    for (std::size_t l = layers; l-- > 0;) {
        const Index in = sizes[l], out = sizes[l + 1];
        Eigen::Map<Mat> gW(grad.data() + w_off[l], in, out);
        Eigen::Map<Vec> gb(grad.data() + b_off[l], out);
        gW.noalias() = activations[l].transpose() * delta;
        gb = delta.colwise().sum();
        if (l > 0) {
            const Eigen::Map<const Mat> W(params.data() + w_off[l], in, out);
            delta = (delta * W.transpose()).cwiseProduct(
                (activations[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

namespace detail {

namespace {

std::vector<Index> parse_hidden(const std::string& text) {
    std::vector<Index> sizes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) sizes.push_back(static_cast<Index>(std::stol(tok)));
    if (sizes.empty() || sizes.size() > 2)
        throw std::invalid_argument("mlp: hidden_layer_sizes must name one or two layers");
    return sizes;
}

} // namespace

std::unique_ptr<MlpModel> MlpModel::fit(const ClassifierSpec& spec, const Dataset& ds,
                                        std::uint64_t seed) {
    const auto hidden = parse_hidden(spec.get_string("hidden_layer_sizes", "50"));
    const double lr0 = spec.get_double("learning_rate_init", 1e-2);
    if (!(lr0 > 0)) throw std::invalid_argument("mlp: learning_rate_init must be > 0");
    const std::string solver = spec.get_string("solver", "sgd");
    if (solver != "sgd")
        throw std::invalid_argument("mlp: only mini-batch sgd is implemented");
    const std::string schedule = spec.get_string("learning_rate", "constant");
    if (schedule != "constant" && schedule != "invscaling")
        throw std::invalid_argument("mlp: learning_rate must be 'constant' or 'invscaling'");

    const int max_epochs = 150;
    const Index batch_size = 32;
    const double tol = 1e-6;
    const int patience = 10;

    auto m = std::make_unique<MlpModel>();
    m->n_features_ = ds.cols();
    Rng rng(mix64(seed, 0x317b));
    m->net = MlpNet::init(ds.cols(), hidden, rng);

    const Vec y = ds.y.cast<double>();
    std::vector<Index> order(static_cast<std::size_t>(ds.rows()));
    std::iota(order.begin(), order.end(), Index{0});

    Vec grad(m->net.param_count());
    double best_loss = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int epoch = 1; epoch <= max_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        const double lr = schedule == "constant"
                              ? lr0
                              : lr0 / std::sqrt(static_cast<double>(epoch));
        double epoch_loss = 0.0;
        Index seen = 0;
        for (Index start = 0; start < ds.rows(); start += batch_size) {
            const Index take = std::min(batch_size, ds.rows() - start);
            Mat bX(take, ds.cols());
            Vec by(take);
            for (Index i = 0; i < take; ++i) {
                bX.row(i) = ds.X.row(order[static_cast<std::size_t>(start + i)]);
                by[i] = y[order[static_cast<std::size_t>(start + i)]];
            }
            epoch_loss += m->net.loss_and_grad(bX, by, grad) * static_cast<double>(take);
            seen += take;
            m->net.params -= lr * grad;
        }
        epoch_loss /= static_cast<double>(seen);
        if (epoch_loss < best_loss - tol) {
            best_loss = epoch_loss;
            stall = 0;
        } else if (++stall >= patience && epoch >= 20) {
            break;
        }
    }
    return m;
}

Vec MlpModel::score_impl(const Mat& X) const { return net.scores(X); }

nlohmann::json MlpModel::to_json() const {
    return {{"algorithm", "mlp"},
            {"n_features", n_features_},
            {"sizes", std::vector<Index>(net.sizes.begin(), net.sizes.end())},
            {"params", vec_to_json(net.params)}};
}

std::unique_ptr<MlpModel> MlpModel::load(const nlohmann::json& j) {
    auto m = std::make_unique<MlpModel>();
    m->n_features_ = j.at("n_features").get<Index>();
    m->net.sizes = j.at("sizes").get<std::vector<Index>>();
    m->net.params = vec_from_json(j.at("params"));
    return m;
}

} // namespace detail

} // namespace bnn::ml
