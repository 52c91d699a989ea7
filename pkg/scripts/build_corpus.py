"""Regenerate the bundled JSON problem files from the corpus builders."""

from twistcoh.corpus import write_all

if __name__ == "__main__":
    for path in write_all():
        print(path)
