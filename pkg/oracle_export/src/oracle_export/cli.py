"""Command-line entry points for the export scripts."""

import argparse
import sys

from . import recipes


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="oracle-export",
        description="Regenerate the committed number-field / modular-form "
        "fixtures from the built-in exact backend.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_all = sub.add_parser("regenerate", help="rebuild every committed fixture")
    p_all.add_argument("--out-dir", required=True)

    p_form = sub.add_parser("newform", help="export one newform expansion")
    p_form.add_argument("recipe", choices=sorted(recipes.RECIPES))
    p_form.add_argument("--out-dir", required=True)
    p_form.add_argument(
        "--newform-index",
        type=int,
        default=None,
        help="override the recipe's orbit selector (guard test hook)",
    )

    p_field = sub.add_parser("field", help="export one field description")
    p_field.add_argument(
        "name", choices=["rational_field", "weight24_field", "weight44_field"]
    )
    p_field.add_argument("--out-dir", required=True)

    p_spot = sub.add_parser("spotchecks", help="export the valuation oracle table")
    p_spot.add_argument("--out-dir", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "regenerate":
            paths = recipes.regenerate_all(args.out_dir)
            for p in paths:
                print(p)
        elif args.command == "newform":
            recipe = recipes.RECIPES[args.recipe]
            if args.newform_index is not None:
                recipe = recipes.ExportRecipe(
                    recipe.weight,
                    args.newform_index,
                    recipe.expected_min_poly,
                    recipe.embedding,
                    recipe.precision,
                    recipe.form_name,
                    recipe.field_name,
                )
            print(recipes.export_newform(recipe, args.out_dir))
        elif args.command == "field":
            print(recipes.export_field(args.name, args.out_dir))
        elif args.command == "spotchecks":
            print(recipes.export_valuation_spotchecks(args.out_dir))
    except recipes.GuardError as exc:
        print(f"guard fired: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
