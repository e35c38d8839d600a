import pytest

from omwa import PinyinTable, default_inventory, default_table

FIG_TABLE_TSV = """\
北	bei
背	bei
呗	bei
倍	bei
被	bei
京	jing
竟	jing
精	jing
景	jing
静	jing
经	jing
你	ni
在	zai
做	zuo
什	shen,shi
么	me
我	wo
爱	ai
吃	chi
"""


@pytest.fixture(scope="session")
def fig_table() -> PinyinTable:
    return PinyinTable.load(FIG_TABLE_TSV)


@pytest.fixture(scope="session")
def full_table() -> PinyinTable:
    return default_table()


@pytest.fixture(scope="session")
def inventory() -> frozenset:
    return default_inventory()
