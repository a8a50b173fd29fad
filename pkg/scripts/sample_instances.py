# scripts/sample_instances.py
import os
import sys
from faker import Faker

# Add the project root to the sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from cohpres import create_app
from cohpres.core import Path, identity, join_word
from cohpres.dsl import load_presentation
from cohpres.errors import CohpresError
from cohpres.objects import equational_successors, successors
from cohpres.residuation import derive_residual_table, residual_pair

# Initialize Faker for random words and walks
fake = Faker()


def random_word(objects, max_length: int = 5) -> tuple:
    """A random nonempty word over the object generators."""
    length = fake.random_int(min=1, max=max_length)
    return tuple(fake.random_elements(elements=objects, length=length, unique=False))


def random_walk(word, p, max_steps: int = 3, equational: bool = False) -> Path:
    """A random path from ``word``; stops early at words with no applicable step."""
    path = identity(word)
    for _ in range(fake.random_int(min=1, max=max_steps)):
        options = equational_successors(path.target, p) if equational else successors(path.target, p.generators)
        if not options:
            break
        step = fake.random_element(elements=options)
        path = path.then(Path(path.target, (step,)))
    return path


def sample_instances(corpus_file: str, count: int = 20, seed: int = 0):
    """Print residuals of random coinitial path pairs (g, f) with f equational."""
    Faker.seed(seed)
    app = create_app()
    with app.app_context():
        p = load_presentation(corpus_file)
        table = derive_residual_table(p)
        shown = 0
        while shown < count:
            word = random_word(p.objects)
            f = random_walk(word, p, equational=True)
            if f.is_identity:
                continue
            g = random_walk(word, p)
            try:
                g_over_f, f_over_g = residual_pair(g, f, table)
            except CohpresError as e:
                app.logger.error(f"Residual of {g} after {f} failed: {e}")
                continue
            print(f"{join_word(word)}:  g = {g}  f = {f}")
            print(f"    g/f = {g_over_f}")
            print(f"    f/g = {f_over_g}")
            shown += 1
        app.logger.info(f"Printed {shown} sampled instances from {corpus_file}")


if __name__ == "__main__":
    corpus = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "corpus", "ds2.cp")
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 20
    sample_instances(corpus, count)
