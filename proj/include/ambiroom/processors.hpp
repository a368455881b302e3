#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ambiroom/array.hpp"
#include "ambiroom/hrtf.hpp"
#include "ambiroom/signal.hpp"

namespace ambiroom {

// Stateless linear SH-domain processor. process() is implemented once on top
// of the per-bin kernel; a chain pre-multiplies adjacent kernels so the whole
// pipeline costs one forward and one inverse transform.
class Processor {
public:
    virtual ~Processor() = default;

    virtual SpaceDomain in_space() const = 0;
    virtual SpaceDomain out_space() const = 0;
    virtual int in_spatial() const = 0;
    virtual int out_spatial() const = 0;
    virtual int in_order() const { return -1; }
    virtual int out_order() const { return -1; }

    // Time-domain support of the kernel, used to size the shared transform.
    virtual std::size_t kernel_tail() const = 0;

    // Per-bin transfer matrices (out_spatial x in_spatial) on the real
    // spectrum bins of nfft at rate fs.
    virtual std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const = 0;

    virtual SpatialSignal process(const SpatialSignal& in) const;

protected:
    void check_input(const SpatialSignal& in) const;
};

class BinauralDecoder final : public Processor {
public:
    BinauralDecoder(ShHrtf hrtf, int sh_order = -1);

    SpaceDomain in_space() const override { return SpaceDomain::SH; }
    SpaceDomain out_space() const override { return SpaceDomain::SPACE; }
    int in_spatial() const override { return sh_channel_count(order_); }
    int out_spatial() const override { return 2; }
    int in_order() const override { return order_; }
    std::size_t kernel_tail() const override { return hrtf_.nfft; }
    std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const override;

    const ShHrtf& hrtf() const { return hrtf_; }

private:
    ShHrtf hrtf_;
    int order_;
};

class ArrayDecoder final : public Processor {
public:
    ArrayDecoder(ArraySpec spec, int sh_order);

    SpaceDomain in_space() const override { return SpaceDomain::SH; }
    SpaceDomain out_space() const override { return SpaceDomain::SPACE; }
    int in_spatial() const override { return sh_channel_count(order_); }
    int out_spatial() const override { return spec_.capsule_dirs.n_dirs(); }
    int in_order() const override { return order_; }
    std::size_t kernel_tail() const override { return 512; }
    std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const override;

private:
    ArraySpec spec_;
    int order_;
};

class AsmEncoder final : public Processor {
public:
    // eps < 0 selects the scale-invariant per-bin default.
    AsmEncoder(ArraySpec spec, int sh_order, double eps = -1.0);

    SpaceDomain in_space() const override { return SpaceDomain::SPACE; }
    SpaceDomain out_space() const override { return SpaceDomain::SH; }
    int in_spatial() const override { return spec_.capsule_dirs.n_dirs(); }
    int out_spatial() const override { return sh_channel_count(order_); }
    int out_order() const override { return order_; }
    std::size_t kernel_tail() const override { return 512; }
    std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const override;

private:
    ArraySpec spec_;
    int order_;
    double eps_;
};

class BsmRenderer final : public Processor {
public:
    BsmRenderer(ArraySpec spec, ShHrtf hrtf, double eps = -1.0, bool magls_pre = false,
                double magls_fc = 0.0);

    SpaceDomain in_space() const override { return SpaceDomain::SPACE; }
    SpaceDomain out_space() const override { return SpaceDomain::SPACE; }
    int in_spatial() const override { return spec_.capsule_dirs.n_dirs(); }
    int out_spatial() const override { return 2; }
    std::size_t kernel_tail() const override { return hrtf_.nfft; }
    std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const override;

private:
    ArraySpec spec_;
    ShHrtf hrtf_;
    double eps_;
    bool magls_pre_;
    double magls_fc_;
};

class ProcessorChain final : public Processor {
public:
    explicit ProcessorChain(std::vector<std::shared_ptr<const Processor>> stages);

    SpaceDomain in_space() const override { return stages_.front()->in_space(); }
    SpaceDomain out_space() const override { return stages_.back()->out_space(); }
    int in_spatial() const override { return stages_.front()->in_spatial(); }
    int out_spatial() const override { return stages_.back()->out_spatial(); }
    int in_order() const override { return stages_.front()->in_order(); }
    int out_order() const override { return stages_.back()->out_order(); }
    std::size_t kernel_tail() const override;
    std::vector<Eigen::MatrixXcd> kernel(std::size_t nfft, double fs) const override;

private:
    std::vector<std::shared_ptr<const Processor>> stages_;
};

}  // namespace ambiroom
