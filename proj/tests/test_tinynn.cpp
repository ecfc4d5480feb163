#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "support/gradcheck.hpp"
#include "textdet/nn/layers.hpp"
#include "textdet/nn/loss.hpp"
#include "textdet/nn/optimizer.hpp"
#include "textdet/nn/serialize.hpp"
#include "textdet/nn/tensor.hpp"
#include "textdet/textcnn/model.hpp"

using namespace textdet;
using Catch::Approx;

TEST_CASE("conv output geometry follows the valid-convolution arithmetic") {
    Conv2d conv(3, 4, 9);
    Tensor in(2, 3, 32, 32);
    Tensor out = conv.forward(in);
    CHECK(out.n == 2);
    CHECK(out.c == 4);
    CHECK(out.h == 24);
    CHECK(out.w == 24);
    CHECK_THROWS_AS(conv.forward(Tensor(1, 2, 32, 32)), std::invalid_argument);
    CHECK_THROWS_AS(conv.forward(Tensor(1, 3, 8, 8)), std::invalid_argument);
}

TEST_CASE("a 1x1 identity kernel passes the input through") {
    Conv2d conv(1, 1, 1);
    conv.p.weights.data[0] = 1.f;
    Tensor in(1, 1, 5, 5);
    Rng rng(3);
    gradcheck::randomize(in, rng);
    CHECK(conv.forward(in).data == in.data);

    Deconv2d deconv(1, 1, 1);
    deconv.p.weights.data[0] = 1.f;
    CHECK(deconv.forward(in).data == in.data);
}

TEST_CASE("conv forward matches a nested-loop oracle") {
    Rng rng(11);
    Conv2d conv(2, 3, 3);
    gradcheck::randomize(conv.p.weights, rng);
    gradcheck::randomize(conv.p.biases, rng);
    Tensor in(2, 2, 6, 6);
    gradcheck::randomize(in, rng);
    Tensor out = conv.forward(in);

    for (int s = 0; s < 2; ++s)
        for (int oc = 0; oc < 3; ++oc)
            for (int oy = 0; oy < 4; ++oy)
                for (int ox = 0; ox < 4; ++ox) {
                    double acc = conv.p.biases.data[oc];
                    for (int ic = 0; ic < 2; ++ic)
                        for (int dy = 0; dy < 3; ++dy)
                            for (int dx = 0; dx < 3; ++dx)
                                acc += static_cast<double>(
                                           conv.p.weights.at(oc, ic, dy, dx)) *
                                       in.at(s, ic, oy + dy, ox + dx);
                    CHECK(out.at(s, oc, oy, ox) == Approx(acc).margin(1e-6));
                }
}

TEST_CASE("deconv geometry expands by the kernel size") {
    Deconv2d d1(4, 2, 7);
    Tensor mid = d1.forward(Tensor(1, 4, 18, 18));
    CHECK(mid.h == 24);
    CHECK(mid.w == 24);
    Deconv2d d2(2, 1, 9);
    Tensor out = d2.forward(mid);
    CHECK(out.h == 32);
    CHECK(out.w == 32);
    CHECK_THROWS_AS(d2.forward(Tensor(1, 5, 24, 24)), std::invalid_argument);
}

TEST_CASE("conv and deconv with a shared kernel buffer are adjoint") {
    Rng rng(23);
    for (int seed = 0; seed < 3; ++seed) {
        Conv2d conv(3, 4, 5);
        gradcheck::randomize(conv.p.weights, rng);
        Deconv2d deconv(4, 3, 5);
        deconv.p.weights = conv.p.weights;  // same buffer layout by design

        Tensor x(1, 3, 9, 9), y(1, 4, 5, 5);
        gradcheck::randomize(x, rng);
        gradcheck::randomize(y, rng);
        double lhs = 0.0, rhs = 0.0;
        Tensor cx = conv.forward(x);
        Tensor dy = deconv.forward(y);
        for (std::size_t i = 0; i < cx.data.size(); ++i)
            lhs += static_cast<double>(cx.data[i]) * y.data[i];
        for (std::size_t i = 0; i < dy.data.size(); ++i)
            rhs += static_cast<double>(dy.data[i]) * x.data[i];
        CHECK(lhs == Approx(rhs).margin(1e-5 * std::max(1.0, std::abs(lhs))));
    }
}

TEST_CASE("maxpool pools 18x18 to 6x6 and routes gradient to the argmax") {
    Tensor in(1, 2, 18, 18);
    Rng rng(5);
    gradcheck::randomize(in, rng);
    MaxPoolResult r = maxpool_forward(in, 3, 3);
    CHECK(r.out.h == 6);
    CHECK(r.out.w == 6);

    Tensor constant(1, 1, 9, 9, 2.5f);
    CHECK(maxpool_forward(constant, 3, 3).out.data == std::vector<float>(9, 2.5f));

    Tensor gout = r.out;
    gout.fill(1.f);
    Tensor gin = maxpool_backward(r, in, gout);
    int nonzero = 0;
    for (float v : gin.data) nonzero += v != 0.f;
    CHECK(nonzero == 2 * 6 * 6);  // one winner per window per channel
    for (std::size_t i = 0; i < r.argmax.size(); ++i) CHECK(gin.data[r.argmax[i]] == 1.f);
}

TEST_CASE("softmax cross-entropy matches the closed forms") {
    SECTION("uniform logits over 62 classes") {
        Tensor logits = Tensor::matrix(1, 62, 0.37f);
        int label = 17;
        LossResult r = softmax_xent(logits, std::span<const int>(&label, 1));
        CHECK(r.loss == Approx(std::log(62.0)).epsilon(1e-5));
    }
    SECTION("dominant correct logit drives the loss to zero") {
        Tensor logits = Tensor::matrix(1, 5, 0.f);
        logits.data[2] = 20.f;
        int label = 2;
        LossResult r = softmax_xent(logits, std::span<const int>(&label, 1));
        CHECK(r.loss == Approx(0.0).margin(1e-6));
    }
    SECTION("random logits match a direct evaluation") {
        Rng rng(29);
        Tensor logits = Tensor::matrix(3, 5);
        gradcheck::randomize(logits, rng, -2.0, 2.0);
        std::vector<int> labels = {4, 0, 2};
        LossResult r = softmax_xent(logits, labels);
        double expected = 0.0;
        for (int s = 0; s < 3; ++s) {
            double denom = 0.0;
            for (int c = 0; c < 5; ++c) denom += std::exp(static_cast<double>(logits.data[s * 5 + c]));
            expected += -std::log(std::exp(static_cast<double>(logits.data[s * 5 + labels[s]])) / denom);
        }
        CHECK(r.loss == Approx(expected / 3).epsilon(1e-6));
    }
    SECTION("labels of -1 contribute nothing") {
        Tensor logits = Tensor::matrix(2, 4, 0.f);
        logits.data[1] = 3.f;
        std::vector<int> labels = {-1, 1};
        LossResult r = softmax_xent(logits, labels);
        CHECK(r.contributing == 1);
        for (int c = 0; c < 4; ++c) CHECK(r.grad.data[c] == 0.f);
    }
    SECTION("out-of-range label throws") {
        Tensor logits = Tensor::matrix(1, 4, 0.f);
        int label = 9;
        CHECK_THROWS_AS(softmax_xent(logits, std::span<const int>(&label, 1)),
                        std::invalid_argument);
    }
}

TEST_CASE("l2 mask loss sums squared differences") {
    Tensor pred(1, 1, 32, 32, 1.f);
    Tensor target(1, 1, 32, 32, 0.f);
    CHECK(l2_mask_loss(pred, target).loss == Approx(1024.0));
    CHECK(l2_mask_loss(pred, pred).loss == Approx(0.0));
    CHECK_THROWS_AS(l2_mask_loss(pred, Tensor(1, 1, 16, 16)), std::invalid_argument);

    Rng rng(31);
    Tensor a(2, 1, 8, 8), b(2, 1, 8, 8);
    gradcheck::randomize(a, rng);
    gradcheck::randomize(b, rng);
    double expected = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        double d = static_cast<double>(a.data[i]) - b.data[i];
        expected += d * d;
    }
    CHECK(l2_mask_loss(a, b).loss == Approx(expected / 2).margin(1e-5));
}

TEST_CASE("sgd steps follow the momentum update") {
    TrainConfig cfg;
    cfg.learning_rate = 0.1f;

    SECTION("zero gradient, zero decay, zero momentum leaves parameters") {
        cfg.momentum = 0.f;
        cfg.weight_decay = 0.f;
        Linear lin(2, 2);
        Tensor before = lin.p.weights;
        sgd_step(lin.p, cfg);
        CHECK(lin.p.weights.data == before.data);
    }

    SECTION("single scalar matches the hand-computed update") {
        cfg.momentum = 0.5f;
        cfg.weight_decay = 0.1f;
        Linear lin(1, 1);
        lin.p.weights.data[0] = 2.f;
        lin.p.grad_weights.data[0] = 0.3f;
        sgd_step(lin.p, cfg);
        // v = -0.1*(0.3 + 0.1*2) = -0.05; w = 1.95
        CHECK(lin.p.weights.data[0] == Approx(1.95f));
        lin.p.grad_weights.data[0] = 0.f;
        sgd_step(lin.p, cfg);
        // v = 0.5*(-0.05) - 0.1*(0.1*1.95) = -0.0445; w = 1.9055
        CHECK(lin.p.weights.data[0] == Approx(1.9055f).epsilon(1e-5));
    }

    SECTION("identical runs produce bit-identical parameters") {
        auto run = [&] {
            TextCnnModel m(10);
            m.init(77);
            TrainConfig c;
            for (int i = 0; i < 3; ++i) {
                m.for_each_layer([](LayerParams& p) {
                    for (std::size_t j = 0; j < p.grad_weights.data.size(); ++j)
                        p.grad_weights.data[j] = 0.01f * static_cast<float>(j % 7);
                });
                m.for_each_layer([&](LayerParams& p) { sgd_step(p, c); });
            }
            return m.conv2.p.weights.data;
        };
        CHECK(run() == run());
    }
}

namespace {

/// Gradient check driver: forward+project in double, analytic via backward.
template <typename Layer>
void check_layer_gradients(Layer& layer, Tensor in, const char* name, double tolerance = 1e-3) {
    Rng rng(101);
    Tensor out = layer.forward(in);
    Tensor proj = gradcheck::random_projection(out, rng);
    layer.p.zero_grad();
    Tensor gin = layer.backward(in, proj);
    auto loss = [&] { return gradcheck::project(layer.forward(in), proj); };

    double werr = gradcheck::fd_rel_error(layer.p.weights, layer.p.grad_weights, loss);
    double berr = gradcheck::fd_rel_error(layer.p.biases, layer.p.grad_biases, loss);
    INFO(name << " weight rel err " << werr << ", bias rel err " << berr);
    CHECK(werr < tolerance);
    CHECK(berr < tolerance);

    // input gradient via a wrapper over the same projected loss
    double ierr = gradcheck::fd_rel_error(in, gin, loss);
    INFO(name << " input rel err " << ierr);
    CHECK(ierr < tolerance);
}

}  // namespace

TEST_CASE("conv, deconv, and linear gradients match finite differences") {
    Rng rng(4117);
    for (int seed = 0; seed < 5; ++seed) {
        DYNAMIC_SECTION("seed " << seed) {
            Conv2d conv(2, 3, 3);
            gradcheck::randomize(conv.p.weights, rng);
            gradcheck::randomize(conv.p.biases, rng);
            Tensor cin(2, 2, 6, 6);
            gradcheck::randomize(cin, rng);
            check_layer_gradients(conv, cin, "conv3x3");

            Deconv2d deconv(3, 2, 3);
            gradcheck::randomize(deconv.p.weights, rng);
            gradcheck::randomize(deconv.p.biases, rng);
            Tensor din(2, 3, 5, 5);
            gradcheck::randomize(din, rng);
            check_layer_gradients(deconv, din, "deconv3x3");

            Linear lin(12, 7);
            gradcheck::randomize(lin.p.weights, rng);
            gradcheck::randomize(lin.p.biases, rng);
            Tensor lin_in = Tensor::matrix(3, 12);
            gradcheck::randomize(lin_in, rng);
            check_layer_gradients(lin, lin_in, "linear");
        }
    }
}

TEST_CASE("loss gradients match finite differences") {
    Rng rng(900);
    for (int seed = 0; seed < 5; ++seed) {
        DYNAMIC_SECTION("seed " << seed) {
            Tensor logits = Tensor::matrix(4, 9);
            gradcheck::randomize(logits, rng, -2.0, 2.0);
            std::vector<int> labels = {1, -1, 8, 0};
            LossResult r = softmax_xent(logits, labels);
            auto xent_loss = [&] { return softmax_xent(logits, labels).loss; };
            CHECK(gradcheck::fd_rel_error(logits, r.grad, xent_loss) < 1e-3);

            Tensor pred(2, 1, 5, 5), target(2, 1, 5, 5);
            gradcheck::randomize(pred, rng);
            gradcheck::randomize(target, rng);
            LossResult l2 = l2_mask_loss(pred, target);
            auto l2_loss = [&] { return l2_mask_loss(pred, target).loss; };
            CHECK(gradcheck::fd_rel_error(pred, l2.grad, l2_loss) < 1e-3);
        }
    }
}

TEST_CASE("upstream gradient scaling and zeroing behave linearly") {
    Rng rng(55);
    Conv2d conv(2, 2, 3);
    gradcheck::randomize(conv.p.weights, rng);
    Tensor in(1, 2, 5, 5);
    gradcheck::randomize(in, rng);
    Tensor out = conv.forward(in);

    Tensor zero = out;
    zero.fill(0.f);
    conv.p.zero_grad();
    conv.backward(in, zero);
    for (float v : conv.p.grad_weights.data) CHECK(v == 0.f);

    Tensor gout = gradcheck::random_projection(out, rng);
    conv.p.zero_grad();
    conv.backward(in, gout);
    Tensor g1 = conv.p.grad_weights;
    Tensor doubled = gout;
    for (float& v : doubled.data) v *= 2.f;
    conv.p.zero_grad();
    conv.backward(in, doubled);
    for (std::size_t i = 0; i < g1.data.size(); ++i)
        CHECK(conv.p.grad_weights.data[i] == Approx(2.f * g1.data[i]).margin(1e-5));
}

TEST_CASE("TCNN1 files survive write-read-write bit-exactly") {
    TextCnnModel model(62);
    model.init(4242);
    auto dir = std::filesystem::temp_directory_path();
    auto p1 = dir / "textdet_model_a.tcnn";
    auto p2 = dir / "textdet_model_b.tcnn";
    save_model(model, p1.string());
    TextCnnModel loaded = load_model(p1.string());
    save_model(loaded, p2.string());

    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream is(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    std::string a = slurp(p1), b = slurp(p2);
    REQUIRE(!a.empty());
    CHECK(a == b);
    CHECK(a.substr(0, 5) == "TCNN1");
    CHECK(loaded.class_count == 62);
    CHECK(loaded.conv1.p.weights.data == model.conv1.p.weights.data);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("model init is deterministic and duplicates deconv kernels") {
    TextCnnModel a(62), b(62);
    a.init(9);
    b.init(9);
    CHECK(a.conv1.p.weights.data == b.conv1.p.weights.data);
    CHECK(a.fc2.p.weights.data == b.fc2.p.weights.data);
    CHECK(a.deconv1.p.weights.data == a.conv2.p.weights.data);
    // deconv2 starts from conv1 averaged over input channels
    float expected = (a.conv1.p.weights.at(5, 0, 2, 3) + a.conv1.p.weights.at(5, 1, 2, 3) +
                      a.conv1.p.weights.at(5, 2, 2, 3)) /
                     3.f;
    CHECK(a.deconv2.p.weights.at(5, 0, 2, 3) == Approx(expected));
}

TEST_CASE("load_model rejects foreign files") {
    auto path = std::filesystem::temp_directory_path() / "textdet_not_a_model.bin";
    std::ofstream(path) << "PNG89 something";
    CHECK_THROWS(load_model(path.string()));
    std::filesystem::remove(path);
}
