"""Operator command line: train, evaluate, predict, serve and synth-data.

Exit codes: 0 success, 2 usage error, 1 runtime error. A JSON config file
can preset the model/train/split sections; explicit flags win.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import metrics, store, synth, trainer
from .nn.model import ModelConfig, build_model, load_embedding_text
from .service.bank import QuestionBank
from .service.sessions import ModelDetector, RiskThresholds, SessionManager
from .textproc import clean_text, default_rules, encode, fit_vocabulary, encode_corpus

TOKEN_ENV = "CHATSCREEN_API_TOKEN"


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    return json.loads(Path(path).read_text("utf-8"))


def _train_setup(args) -> tuple[ModelConfig, trainer.TrainConfig, trainer.SplitSpec]:
    config = _load_config_file(args.config)
    model_cfg = ModelConfig.from_dict(config.get("model", {}))
    train_dict = dict(config.get("train", {}))
    if args.epochs is not None:
        train_dict["epochs"] = args.epochs
    if args.batch_size is not None:
        train_dict["batch_size"] = args.batch_size
    if args.seed is not None:
        train_dict["seed"] = args.seed
    train_cfg = trainer.TrainConfig.from_dict(train_dict)
    split_dict = dict(config.get("split", {}))
    if args.seed is not None and "shuffle_seed" not in split_dict:
        split_dict["shuffle_seed"] = args.seed
    split_spec = trainer.SplitSpec.from_dict(split_dict)
    return model_cfg, train_cfg, split_spec


def _prepare_corpus(csv_path, model_cfg, rules):
    texts, labels = trainer.load_corpus_csv(csv_path)
    cleaned = [clean_text(t, rules) for t in texts]
    vocab = fit_vocabulary(cleaned, max_words=model_cfg.vocab_size)
    encoded = encode_corpus(cleaned, vocab, model_cfg.seq_len)
    return encoded, trainer.one_hot(labels, model_cfg.num_classes), vocab


def cmd_train(args) -> int:
    model_cfg, train_cfg, split_spec = _train_setup(args)
    rules = default_rules()
    print(f"loading corpus from {args.data}")
    encoded, onehot, vocab = _prepare_corpus(args.data, model_cfg, rules)
    train_set, val_set, test_set = trainer.split_dataset(encoded, onehot, split_spec)
    print(f"split sizes: train={len(train_set[0])} val={len(val_set[0])} "
          f"test={len(test_set[0])}")
    model = build_model(model_cfg, seed=train_cfg.seed)
    if args.embedding is not None:
        model.embedding[...] = load_embedding_text(
            args.embedding, vocab, model_cfg, base=model.embedding)

    def report(r):
        print(f"epoch {r.epoch}/{train_cfg.epochs}  "
              f"loss={r.train_loss:.4f} acc={r.train_accuracy:.4f}  "
              f"val_loss={r.val_loss:.4f} val_acc={r.val_accuracy:.4f}")

    model, history = trainer.train(model, train_set, val_set, train_cfg, on_epoch=report)
    test_loss, test_acc = trainer.evaluate(model, *test_set)
    print(f"test_loss={test_loss:.4f} test_acc={test_acc:.4f} "
          f"(stopped at epoch {history.stopped_epoch}, best epoch {history.best_epoch})")
    checksum = store.save(model, vocab, args.out)
    print(f"saved model archive to {args.out} (checksum {checksum})")
    if args.history is not None:
        trainer.export_history(history, args.history)
        print(f"wrote history to {args.history}")
    return 0


def cmd_evaluate(args) -> int:
    model, vocab = store.load(args.model)
    rules = default_rules()
    texts, labels = trainer.load_corpus_csv(args.data)
    cleaned = [clean_text(t, rules) for t in texts]
    encoded = encode_corpus(cleaned, vocab, model.config.seq_len)
    probs = model.predict_probs(encoded)
    predictions = probs.argmax(axis=1).tolist()
    cm = metrics.build_confusion(labels, predictions)
    cls = metrics.class_stats(cm)
    overall = metrics.overall_stats(cm)
    text = metrics.render_report(cls, overall, cm, args.report_dir)
    print(text)
    print(f"reports written to {args.report_dir}")
    return 0


def cmd_predict(args) -> int:
    model, vocab = store.load(args.model)
    cleaned = clean_text(args.text, default_rules())
    encoded = encode(cleaned, vocab, model.config.seq_len)
    probs = model.forward(encoded[None, :], mode="infer")
    p_suicide = float(probs[0, 0])
    label = trainer.CLASS_NAMES[0] if p_suicide >= 0.5 else trainer.CLASS_NAMES[1]
    print(f"suicide_probability={p_suicide:.6f} label={label}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.api import create_app

    model, vocab = store.load(args.model)
    bank = QuestionBank.load(args.bank) if args.bank else QuestionBank.default()
    thresholds = RiskThresholds()
    if args.thresholds is not None:
        thresholds = RiskThresholds.from_dict(
            json.loads(Path(args.thresholds).read_text("utf-8")))
    manager = SessionManager(
        bank=bank,
        detector=ModelDetector(model, vocab),
        thresholds=thresholds,
        data_dir=args.data_dir,
        model_checksum=store.read_checksum(args.model),
    )
    app = create_app(manager, token=os.environ.get(TOKEN_ENV))
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def cmd_synth_data(args) -> int:
    texts, labels = synth.generate_corpus(args.n, args.seed)
    synth.write_corpus_csv(args.out, texts, labels)
    print(f"wrote {args.n} synthetic samples to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chatscreen",
        description="Suicidal-ideation classifier and chat screening service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from a corpus CSV")
    p.add_argument("--data", required=True, help="corpus CSV with text,class columns")
    p.add_argument("--config", help="JSON config with model/train/split sections")
    p.add_argument("--out", required=True, help="output model archive path")
    p.add_argument("--history", help="per-epoch history CSV path")
    p.add_argument("--embedding", help="optional pretrained word-vector text file")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate an archive on a labeled CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--report-dir", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="score a single text")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="run the chat screening HTTP service")
    p.add_argument("--model", required=True)
    p.add_argument("--bank", help="question bank JSON (default: bundled placeholder)")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.add_argument("--data-dir", help="directory for per-session event logs")
    p.add_argument("--thresholds", help="JSON file overriding risk thresholds")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("synth-data", help="generate the synthetic benchmark corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_synth_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
