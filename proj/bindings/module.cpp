// Python bindings for the main operations: the Countdown environment, model
// init and checkpoints, group sampling, evaluation, training, and run-config
// loading. Config structs bind with value semantics: reading a nested section
// returns a copy, so mutate a section object and assign it back.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moerl/cli.hpp"
#include "moerl/common.hpp"
#include "moerl/countdown.hpp"
#include "moerl/model.hpp"
#include "moerl/objectives.hpp"
#include "moerl/rollout.hpp"
#include "moerl/trainer.hpp"

namespace py = pybind11;
using namespace moerl;

PYBIND11_MODULE(_moerl, m) {
    m.doc() = "Router-shift policy optimization lab on a tiny mixture-of-experts LM";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    m.def("derive_seed",
          [](uint64_t root, const std::string& label, uint64_t a, uint64_t b) {
              return derive_seed(root, label, a, b);
          },
          py::arg("root"), py::arg("label"), py::arg("a") = 0, py::arg("b") = 0);

    // environment
    py::class_<rollout::Tokenizer>(m, "Tokenizer")
        .def(py::init<>())
        .def_property_readonly("vocab_size", &rollout::Tokenizer::vocab_size)
        .def("encode", &rollout::Tokenizer::encode, py::arg("text"))
        .def("decode", &rollout::Tokenizer::decode, py::arg("ids"));

    py::class_<rollout::CountdownInstance>(m, "CountdownInstance")
        .def_readonly("operands", &rollout::CountdownInstance::operands)
        .def_readonly("target", &rollout::CountdownInstance::target)
        .def_readonly("prompt_text", &rollout::CountdownInstance::prompt_text)
        .def_readonly("prompt_tokens", &rollout::CountdownInstance::prompt_tokens)
        .def_readonly("instance_id", &rollout::CountdownInstance::instance_id)
        .def("__repr__", [](const rollout::CountdownInstance& c) {
            return "<CountdownInstance '" + c.prompt_text + "'>";
        });

    m.def("render_prompt", &rollout::render_prompt, py::arg("operands"), py::arg("target"));
    m.def("make_instance", &rollout::make_instance, py::arg("operands"), py::arg("target"),
          py::arg("tokenizer"));
    m.def("gen_instance", &rollout::gen_instance, py::arg("seed"), py::arg("tokenizer"));
    m.def("gen_eval_set", &rollout::gen_eval_set, py::arg("seed"), py::arg("n"),
          py::arg("tokenizer"));
    m.def("write_eval_set", &rollout::write_eval_set, py::arg("path"), py::arg("instances"));
    m.def("read_eval_set", &rollout::read_eval_set, py::arg("path"), py::arg("tokenizer"));
    m.def("reward", &rollout::reward, py::arg("instance"), py::arg("response"),
          py::arg("format_bonus") = false);
    m.def("solvable", &rollout::solvable, py::arg("operands"), py::arg("target"));
    m.def("random_expression",
          [](uint64_t seed, const std::vector<int64_t>& operands) {
              Rng rng(seed);
              const auto e = rollout::random_expression(rng, operands);
              return py::make_tuple(e.text, e.value);
          },
          py::arg("seed"), py::arg("operands"));

    // model
    py::class_<model::ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("vocab_size", &model::ModelConfig::vocab_size)
        .def_readwrite("d_model", &model::ModelConfig::d_model)
        .def_readwrite("n_layers", &model::ModelConfig::n_layers)
        .def_readwrite("n_heads", &model::ModelConfig::n_heads)
        .def_readwrite("n_experts", &model::ModelConfig::n_experts)
        .def_readwrite("top_k", &model::ModelConfig::top_k)
        .def_readwrite("d_ff", &model::ModelConfig::d_ff)
        .def_readwrite("max_seq_len", &model::ModelConfig::max_seq_len)
        .def_readwrite("aux_load_balance_coef", &model::ModelConfig::aux_load_balance_coef)
        .def_readwrite("seed", &model::ModelConfig::seed)
        .def("validate", &model::ModelConfig::validate);

    py::class_<model::MoeLm>(m, "MoeLm")
        .def_static("init", &model::MoeLm::init, py::arg("config"))
        .def_property_readonly("n_params",
                               [](const model::MoeLm& lm) {
                                   int64_t n = 0;
                                   for (const auto& p : lm.params()) n += p.numel();
                                   return n;
                               })
        .def_property_readonly("checksum", &model::param_checksum);

    m.def("save_checkpoint", &model::save_checkpoint, py::arg("model"), py::arg("step"),
          py::arg("path"));
    m.def("load_checkpoint",
          [](const std::string& path) {
              auto lc = model::load_checkpoint(path);
              return py::make_tuple(std::move(lc.model), lc.step);
          },
          py::arg("path"));

    // sampling
    py::class_<rollout::RolloutConfig>(m, "RolloutConfig")
        .def(py::init<>())
        .def_readwrite("group_size", &rollout::RolloutConfig::group_size)
        .def_readwrite("temperature", &rollout::RolloutConfig::temperature)
        .def_readwrite("max_new_tokens", &rollout::RolloutConfig::max_new_tokens)
        .def_readwrite("std_epsilon", &rollout::RolloutConfig::std_epsilon)
        .def_readwrite("format_bonus", &rollout::RolloutConfig::format_bonus)
        .def("validate", &rollout::RolloutConfig::validate);

    py::class_<rollout::ResponseRecord>(m, "ResponseRecord")
        .def_readonly("tokens", &rollout::ResponseRecord::tokens)
        .def_readonly("text", &rollout::ResponseRecord::text)
        .def_readonly("old_logp", &rollout::ResponseRecord::old_logp)
        .def_readonly("reward", &rollout::ResponseRecord::reward)
        .def_readonly("advantage", &rollout::ResponseRecord::advantage)
        .def_readonly("mean_token_entropy", &rollout::ResponseRecord::mean_token_entropy);

    py::class_<rollout::RolloutGroup>(m, "RolloutGroup")
        .def_readonly("instance", &rollout::RolloutGroup::instance)
        .def_readonly("responses", &rollout::RolloutGroup::responses);

    py::class_<model::PolicySnapshot>(m, "PolicySnapshot")
        .def_readonly("step", &model::PolicySnapshot::step);
    m.def("snapshot", &model::snapshot, py::arg("model"), py::arg("step"));
    m.def("sample_group", &rollout::sample_group, py::arg("snapshot"), py::arg("instance"),
          py::arg("config"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("greedy_decode", &rollout::greedy_decode, py::arg("model"), py::arg("instance"),
          py::arg("max_new_tokens"), py::call_guard<py::gil_scoped_release>());

    // objectives
    py::enum_<objectives::ObjectiveKind>(m, "ObjectiveKind")
        .value("grpo", objectives::ObjectiveKind::grpo)
        .value("gspo", objectives::ObjectiveKind::gspo)
        .value("gmpo", objectives::ObjectiveKind::gmpo)
        .value("rspo", objectives::ObjectiveKind::rspo)
        .value("grpo_shift", objectives::ObjectiveKind::grpo_shift)
        .value("gspo_shift", objectives::ObjectiveKind::gspo_shift);

    py::enum_<objectives::GammaPlacement>(m, "GammaPlacement")
        .value("inside_sign", objectives::GammaPlacement::inside_sign)
        .value("on_ratio", objectives::GammaPlacement::on_ratio);

    py::enum_<model::RoutingKind>(m, "RoutingKind")
        .value("free", model::RoutingKind::free)
        .value("frozen", model::RoutingKind::frozen)
        .value("replay_logits", model::RoutingKind::replay_logits)
        .value("replay_indices", model::RoutingKind::replay_indices);

    py::class_<objectives::ObjectiveConfig>(m, "ObjectiveConfig")
        .def(py::init<>())
        .def_readwrite("kind", &objectives::ObjectiveConfig::kind)
        .def_readwrite("eps", &objectives::ObjectiveConfig::eps)
        .def_readwrite("eps_low", &objectives::ObjectiveConfig::eps_low)
        .def_readwrite("eps_high", &objectives::ObjectiveConfig::eps_high)
        .def_readwrite("gamma_min", &objectives::ObjectiveConfig::gamma_min)
        .def_readwrite("gamma_placement", &objectives::ObjectiveConfig::gamma_placement)
        .def_readwrite("stop_grad_gamma", &objectives::ObjectiveConfig::stop_grad_gamma)
        .def_readwrite("hard_mask", &objectives::ObjectiveConfig::hard_mask)
        .def("validate", &objectives::ObjectiveConfig::validate);

    // training
    py::class_<trainer::TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("objective", &trainer::TrainConfig::objective)
        .def_readwrite("routing", &trainer::TrainConfig::routing)
        .def_readwrite("sampling", &trainer::TrainConfig::sampling)
        .def_readwrite("global_batch", &trainer::TrainConfig::global_batch)
        .def_readwrite("mini_batch", &trainer::TrainConfig::mini_batch)
        .def_readwrite("learning_rate", &trainer::TrainConfig::learning_rate)
        .def_readwrite("adam_beta1", &trainer::TrainConfig::adam_beta1)
        .def_readwrite("adam_beta2", &trainer::TrainConfig::adam_beta2)
        .def_readwrite("adam_eps", &trainer::TrainConfig::adam_eps)
        .def_readwrite("grad_clip", &trainer::TrainConfig::grad_clip)
        .def_readwrite("max_steps", &trainer::TrainConfig::max_steps)
        .def_readwrite("eval_every", &trainer::TrainConfig::eval_every)
        .def_readwrite("eval_size", &trainer::TrainConfig::eval_size)
        .def_readwrite("warmup_steps", &trainer::TrainConfig::warmup_steps)
        .def_readwrite("warmup_batch", &trainer::TrainConfig::warmup_batch)
        .def_readwrite("warmup_lr", &trainer::TrainConfig::warmup_lr)
        .def_readwrite("seed", &trainer::TrainConfig::seed)
        .def_readwrite("n_threads", &trainer::TrainConfig::n_threads)
        .def("validate", &trainer::TrainConfig::validate);

    py::class_<trainer::MetricRecord>(m, "MetricRecord")
        .def_readonly("step", &trainer::MetricRecord::step)
        .def_readonly("reward_mean", &trainer::MetricRecord::reward_mean)
        .def_readonly("eval_pass1", &trainer::MetricRecord::eval_pass1)
        .def_readonly("loss", &trainer::MetricRecord::loss)
        .def_readonly("clip_fraction", &trainer::MetricRecord::clip_fraction)
        .def_readonly("mean_gamma", &trainer::MetricRecord::mean_gamma)
        .def_readonly("fraction_gamma_floored", &trainer::MetricRecord::fraction_gamma_floored)
        .def_readonly("token_entropy", &trainer::MetricRecord::token_entropy)
        .def_readonly("non_shifted_routing_ratio",
                      &trainer::MetricRecord::non_shifted_routing_ratio)
        .def_readonly("router_fluctuation_rate", &trainer::MetricRecord::router_fluctuation_rate)
        .def_readonly("grad_norm", &trainer::MetricRecord::grad_norm);

    py::class_<trainer::EvalResult>(m, "EvalResult")
        .def_readonly("pass1", &trainer::EvalResult::pass1)
        .def_readonly("rewards", &trainer::EvalResult::rewards)
        .def_readonly("texts", &trainer::EvalResult::texts);

    py::class_<trainer::TrainResult>(m, "TrainResult")
        .def_readonly("aborted", &trainer::TrainResult::aborted)
        .def_readonly("steps_completed", &trainer::TrainResult::steps_completed)
        .def_readonly("records", &trainer::TrainResult::records)
        .def_readonly("collapse_steps", &trainer::TrainResult::collapse_steps)
        .def_readonly("final_eval", &trainer::TrainResult::final_eval);

    m.def("evaluate", &trainer::evaluate, py::arg("model"), py::arg("eval_set"),
          py::arg("max_new_tokens"), py::call_guard<py::gil_scoped_release>());
    m.def("train", &trainer::train, py::arg("model"), py::arg("config"), py::arg("out_dir"),
          py::call_guard<py::gil_scoped_release>());
    m.def("warmup", &trainer::warmup, py::arg("model"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    // run configs
    py::class_<cli::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("model", &cli::RunConfig::model)
        .def_readwrite("train", &cli::RunConfig::train)
        .def_readwrite("seed", &cli::RunConfig::seed)
        .def_readwrite("out_dir", &cli::RunConfig::out_dir)
        .def("finalize", &cli::RunConfig::finalize);

    m.def("load_run_config", &cli::load_run_config, py::arg("source"),
          py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{});
    m.def("run_config_json",
          [](const cli::RunConfig& c) { return cli::resolved_json(c).dump(2); });
    m.def("preset_names", &cli::preset_names);
}
