#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace safectrl {

/// Fully connected network with rectified-linear hidden layers and a linear
/// output layer. Templated on the scalar so the finite-difference oracle can
/// run the identical arithmetic in double precision; the trained artifact
/// uses float.
template <typename Scalar>
class Mlp {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Mlp() = default;
    explicit Mlp(std::vector<int> dims);

    /// Uniform init scaled by layer fan-in: U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    void init(std::uint64_t seed);

    const std::vector<int>& dims() const { return dims_; }
    int input_size() const { return dims_.front(); }
    int output_size() const { return dims_.back(); }
    std::size_t layer_count() const { return weights_.size(); }

    std::vector<Matrix>& weights() { return weights_; }
    std::vector<Vector>& biases() { return biases_; }
    const std::vector<Matrix>& weights() const { return weights_; }
    const std::vector<Vector>& biases() const { return biases_; }

    Vector forward(const Vector& input) const;

    struct ForwardCache {
        std::vector<Matrix> activations;  // activations[0] = input batch
    };

    /// Columns are samples. Fills the cache for backward().
    Matrix forward_batch(const Matrix& input, ForwardCache* cache = nullptr) const;

    struct Gradients {
        std::vector<Matrix> dW;
        std::vector<Vector> db;
    };

    /// Backpropagates dLoss/dOutput (same shape as the batch output).
    Gradients backward(const ForwardCache& cache, const Matrix& output_grad) const;

    template <typename Other>
    Mlp<Other> cast() const {
        Mlp<Other> out(dims_);
        for (std::size_t l = 0; l < weights_.size(); ++l) {
            out.weights()[l] = weights_[l].template cast<Other>();
            out.biases()[l] = biases_[l].template cast<Other>();
        }
        return out;
    }

private:
    std::vector<int> dims_;
    std::vector<Matrix> weights_;  // weights_[l]: dims[l+1] x dims[l]
    std::vector<Vector> biases_;
};

/// Momentum SGD over an Mlp's parameters.
template <typename Scalar>
class SgdMomentum {
public:
    SgdMomentum(double learning_rate, double momentum)
        : lr_(learning_rate), momentum_(momentum) {}

    void step(Mlp<Scalar>& net, const typename Mlp<Scalar>::Gradients& grads);

private:
    double lr_;
    double momentum_;
    std::vector<typename Mlp<Scalar>::Matrix> vW_;
    std::vector<typename Mlp<Scalar>::Vector> vb_;
};

// Weight file: "SCRL", u32 version, u32 ndims, dims, then per layer the
// row-major float32 weight matrix followed by the bias vector,
// little-endian throughout. Round-trips bit-exactly.
void save_network(const Mlp<float>& net, const std::string& path);
Mlp<float> load_network(const std::string& path);  // throws DataError

extern template class Mlp<float>;
extern template class Mlp<double>;
extern template class SgdMomentum<float>;
extern template class SgdMomentum<double>;

}  // namespace safectrl
