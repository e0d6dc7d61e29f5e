#include "safectrl/net.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include "safectrl/types.hpp"

namespace safectrl {

template <typename Scalar>
Mlp<Scalar>::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("network needs >= 2 dims");
    for (int d : dims_)
        if (d <= 0) throw std::invalid_argument("network dims must be positive");
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        weights_.emplace_back(Matrix::Zero(dims_[l + 1], dims_[l]));
        biases_.emplace_back(Vector::Zero(dims_[l + 1]));
    }
}

template <typename Scalar>
void Mlp<Scalar>::init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < weights_[l].size(); ++i)
            weights_[l].data()[i] = static_cast<Scalar>(dist(rng));
        for (Eigen::Index i = 0; i < biases_[l].size(); ++i)
            biases_[l].data()[i] = static_cast<Scalar>(dist(rng));
    }
}

template <typename Scalar>
typename Mlp<Scalar>::Vector Mlp<Scalar>::forward(const Vector& input) const {
    Vector a = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        a = (weights_[l] * a + biases_[l]).eval();
        if (l + 1 < weights_.size()) a = a.cwiseMax(Scalar(0));
    }
    return a;
}

template <typename Scalar>
typename Mlp<Scalar>::Matrix Mlp<Scalar>::forward_batch(const Matrix& input,
                                                        ForwardCache* cache) const {
    if (cache) {
        cache->activations.clear();
        cache->activations.push_back(input);
    }
    Matrix a = input;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Matrix z = (weights_[l] * a).colwise() + biases_[l];
        if (l + 1 < weights_.size()) z = z.cwiseMax(Scalar(0));
        a = std::move(z);
        if (cache) cache->activations.push_back(a);
    }
    return a;
}

template <typename Scalar>
typename Mlp<Scalar>::Gradients Mlp<Scalar>::backward(const ForwardCache& cache,
                                                      const Matrix& output_grad) const {
    const std::size_t layers = weights_.size();
    Gradients grads;
    grads.dW.resize(layers);
    grads.db.resize(layers);
    Matrix delta = output_grad;
    for (std::size_t l = layers; l-- > 0;) {
        if (l + 1 < layers) {
            // ReLU mask of this layer's activation (zero where the unit was off)
            delta = delta.cwiseProduct(
                (cache.activations[l + 1].array() > Scalar(0)).template cast<Scalar>().matrix());
        }
        grads.dW[l] = delta * cache.activations[l].transpose();
        grads.db[l] = delta.rowwise().sum();
        if (l > 0) delta = (weights_[l].transpose() * delta).eval();
    }
    return grads;
}

template <typename Scalar>
void SgdMomentum<Scalar>::step(Mlp<Scalar>& net,
                               const typename Mlp<Scalar>::Gradients& grads) {
    if (vW_.empty()) {
        using M = typename Mlp<Scalar>::Matrix;
        using V = typename Mlp<Scalar>::Vector;
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            vW_.push_back(M::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
            vb_.push_back(V::Zero(net.biases()[l].size()));
        }
    }
    const Scalar mu = static_cast<Scalar>(momentum_);
    const Scalar lr = static_cast<Scalar>(lr_);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        vW_[l] = mu * vW_[l] + grads.dW[l];
        vb_[l] = mu * vb_[l] + grads.db[l];
        net.weights()[l] -= lr * vW_[l];
        net.biases()[l] -= lr * vb_[l];
    }
}

namespace {

constexpr char kMagic[4] = {'S', 'C', 'R', 'L'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw DataError("weight file truncated");
    return static_cast<std::uint32_t>(bytes[0]) |
           (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void write_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

float read_f32(std::istream& in) {
    const std::uint32_t bits = read_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

void save_network(const Mlp<float>& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open weight file for writing: " + path);
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(net.dims().size()));
    for (int d : net.dims()) write_u32(out, static_cast<std::uint32_t>(d));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const auto& W = net.weights()[l];
        for (Eigen::Index r = 0; r < W.rows(); ++r)
            for (Eigen::Index c = 0; c < W.cols(); ++c) write_f32(out, W(r, c));
        const auto& b = net.biases()[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) write_f32(out, b(i));
    }
    if (!out) throw DataError("failed writing weight file: " + path);
}

Mlp<float> load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open weight file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("weight file has wrong magic: " + path);
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw DataError("unsupported weight file version " + std::to_string(version));
    const std::uint32_t ndims = read_u32(in);
    if (ndims < 2 || ndims > 64) throw DataError("implausible dimension count in " + path);
    std::vector<int> dims;
    for (std::uint32_t i = 0; i < ndims; ++i) {
        const std::uint32_t d = read_u32(in);
        if (d == 0 || d > 1'000'000) throw DataError("implausible layer size in " + path);
        dims.push_back(static_cast<int>(d));
    }
    Mlp<float> net(dims);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        auto& W = net.weights()[l];
        for (Eigen::Index r = 0; r < W.rows(); ++r)
            for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = read_f32(in);
        auto& b = net.biases()[l];
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = read_f32(in);
    }
    // detect trailing garbage
    char extra;
    if (in.read(&extra, 1)) throw DataError("weight file has trailing bytes: " + path);
    return net;
}

template class Mlp<float>;
template class Mlp<double>;
template class SgdMomentum<float>;
template class SgdMomentum<double>;

}  // namespace safectrl
